use thiserror::Error;

use crate::classical::TrajectoryRecord;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("theta = {theta} is outside the domain {domain}")]
    Domain { theta: f64, domain: &'static str },

    #[error("metric is singular at theta = {theta} (h = {h})")]
    SingularMetric { theta: f64, h: f64 },

    #[error("point with z = {z} lies on the lower sheet of the hyperboloid")]
    Hemisphere { z: f64 },

    #[error("finite-difference refinement did not converge quadratically (ratio {ratio})")]
    GridTooCoarse { ratio: f64 },

    #[error("grid layout {layout} is incompatible with the problem boundary classification")]
    IncompatibleLayout { layout: &'static str },

    #[error("non-finite coefficient at node {index} (theta = {theta})")]
    NonFiniteCoefficient { index: usize, theta: f64 },

    #[error("eigensolver failed to converge: {0}")]
    ConvergenceFailure(String),

    #[error("trajectory approached a coordinate pole at t = {time} (theta = {theta})")]
    PoleApproach {
        time: f64,
        theta: f64,
        partial: Box<TrajectoryRecord>,
    },

    #[error("implicit midpoint step {step} failed to converge (residual {residual:e})")]
    StepRejected { step: usize, residual: f64 },

    #[error("no classically allowed region for the given energy and momenta")]
    NoAllowedRegion,
}
