//! Classical dynamics and quantum spectra of an infinitesimal rigid rotor
//! (a point mass carrying an orthonormal frame) moving on the sphere, the
//! pseudosphere, or an embedded torus.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`] builds the configuration-space metric on `(θ, φ, ψ)`.
//! * [`groups`] gives the SO(3) and SO(1,2) pictures of the sphere and pseudosphere.
//! * [`operators`] derives the Laplace–Beltrami operator and the separated radial problem.
//! * [`spectral`] discretizes and diagonalizes the radial problem.
//! * [`classical`] integrates Hamilton's equations and performs the Hamilton–Jacobi reduction.
//! * [`selfcheck`] bundles the cross-module invariant checks used by the CLI.

pub mod classical;
pub mod error;
pub mod geometry;
pub mod groups;
pub mod operators;
pub mod potential;
pub mod quadrature;
pub mod selfcheck;
pub mod spectral;

pub use error::{Error, Result};
pub use geometry::{ManifoldKind, ManifoldSpec, MetricField, Profile, RotorParams, Signature};
pub use potential::PotentialSpec;
