//! Spectra of the separated radial problem.
//!
//! Boundary handling per surface: cell-centred grids with zero-flux faces on
//! the poles of the sphere and pseudosphere, a Dirichlet cut at `theta_max`
//! on the pseudosphere, and a periodic grid on the torus.

mod discretize;
mod eigen;
mod grid;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use discretize::{conservative_matrix, discretize, FaceClosure};
pub use eigen::{eigen_symmetric, residual_norm, EigenPairs, SymTridiagonal, RESIDUAL_TOLERANCE};
pub use grid::{
    Grid, Layout, DEFAULT_CELL_CENTERED_NODES, DEFAULT_PERIODIC_NODES, DEFAULT_THETA_MAX, MIN_NODES,
};

use crate::error::{Error, Result};
use crate::geometry::{ManifoldKind, ManifoldSpec, RotorParams};
use crate::operators::{radial_problem, RadialProblem};
use crate::potential::PotentialSpec;

/// Normalization of the full wave function `Ψ = f e^{imφ} e^{isψ}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormConvention {
    /// Configuration space of total volume one.
    UnitVolume,
    /// Sphere: total volume of the 3-sphere of radius `R`, `2π²R³`.
    /// Other surfaces: the Riemannian volume element `√|G| dθ dφ dψ`.
    GeometricVolume,
}

/// Fraction of the lowest state's weight allowed in the outer 5 % of a truncated domain.
pub const TRUNCATION_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpectrumWarning {
    /// The ground state reaches the artificial cut of the pseudosphere.
    Truncation { outer_fraction: f64, theta_max: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub kind: ManifoldKind,
    pub m: i64,
    pub s: i64,
    /// `ε_k`, ascending.
    pub eigenvalues_dimensionless: Vec<f64>,
    /// `E_k = ε_k ħ² / (2MR²)`.
    pub eigenvalues_physical: Vec<f64>,
    pub nodes: Vec<f64>,
    /// Radial functions `f_k` on `nodes` with `Σ f² h δ = 1`.
    pub eigenfunctions: Vec<Vec<f64>>,
    pub spacing: f64,
    pub norm_convention: NormConvention,
    /// Multiply `f_k e^{imφ} e^{isψ}` by this to normalize under `norm_convention`.
    pub normalization_factor: f64,
    /// Richardson error estimate `(ε_n - ε_{n/2}) / 3`, when the half grid is usable.
    pub convergence: Vec<Option<f64>>,
    pub warnings: Vec<SpectrumWarning>,
    /// Free motion on the pseudosphere: the spectrum is continuous and the
    /// returned values are box states of the truncated domain.
    pub scattering: bool,
}

impl SpectrumResult {
    /// `∫ f_a f_b h dθ` by the grid quadrature.
    pub fn weighted_inner(&self, a: usize, b: usize, weight: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.eigenfunctions[a])
            .zip(&self.eigenfunctions[b])
            .map(|((&t, fa), fb)| fa * fb * weight(t))
            .sum::<f64>()
            * self.spacing
    }
}

/// Solves for the `k` lowest levels of the radial problem with quantum numbers `(m, s)`.
#[allow(clippy::too_many_arguments)]
pub fn solve_spectrum(
    spec: &ManifoldSpec,
    rotor: &RotorParams,
    m: i64,
    s: i64,
    potential: &PotentialSpec,
    grid: &Grid,
    k: usize,
    norm: NormConvention,
) -> Result<SpectrumResult> {
    let problem = radial_problem(spec, rotor, m, s, potential)?;
    if spec.kind() != ManifoldKind::Pseudosphere && !matches!(potential, PotentialSpec::Zero) {
        let (lo, hi) = spec.theta_domain().bounds();
        problem.potential().check_covers(lo, hi)?;
    } else if spec.kind() == ManifoldKind::Pseudosphere {
        problem.potential().check_covers(grid.theta_min(), grid.theta_max())?;
    }
    if k > grid.n() {
        return Err(Error::InvalidParameter(format!("k = {k} exceeds the {} grid nodes", grid.n())));
    }

    let (values, functions) = lowest_levels(&problem, grid, k)?;

    let half = grid.n() / 2;
    let convergence = if half >= MIN_NODES && k <= half {
        let coarse = grid.with_nodes(half)?;
        let (coarse_values, _) = lowest_levels(&problem, &coarse, k)?;
        values.iter().zip(&coarse_values).map(|(f, c)| Some((f - c) / 3.0)).collect()
    } else {
        vec![None; k]
    };

    let mut warnings = Vec::new();
    if spec.kind() == ManifoldKind::Pseudosphere && !functions.is_empty() {
        let cut = grid.theta_min() + 0.95 * (grid.theta_max() - grid.theta_min());
        let outer_fraction: f64 = grid
            .nodes()
            .iter()
            .zip(&functions[0])
            .filter(|(t, _)| **t > cut)
            .map(|(&t, f)| f * f * problem.weight(t))
            .sum::<f64>()
            * grid.spacing();
        if outer_fraction > TRUNCATION_THRESHOLD {
            warnings.push(SpectrumWarning::Truncation {
                outer_fraction,
                theta_max: grid.theta_max(),
            });
        }
    }

    let scale = problem.energy_scale();
    Ok(SpectrumResult {
        kind: spec.kind(),
        m,
        s,
        eigenvalues_physical: values.iter().map(|e| e / scale).collect(),
        eigenvalues_dimensionless: values,
        nodes: grid.nodes().to_vec(),
        eigenfunctions: functions,
        spacing: grid.spacing(),
        norm_convention: norm,
        normalization_factor: normalization_factor(spec, rotor, grid, norm),
        convergence,
        warnings,
        scattering: spec.kind() == ManifoldKind::Pseudosphere && potential.is_zero(),
    })
}

/// Eigenvalues and `h`-normalized radial functions on one grid.
fn lowest_levels(problem: &RadialProblem, grid: &Grid, k: usize) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let matrix = discretize(problem, grid)?;
    let pairs = eigen_symmetric(&matrix, k)?;
    let root_weight: Vec<f64> = grid.nodes().iter().map(|&t| problem.weight(t).sqrt()).collect();
    let scale = 1.0 / grid.spacing().sqrt();
    let functions = pairs
        .vectors
        .into_iter()
        .map(|g| g.iter().zip(&root_weight).map(|(gi, w)| gi / w * scale).collect())
        .collect();
    Ok((pairs.values, functions))
}

/// `∫ h dθ` over the solved interval.
fn weight_integral(spec: &ManifoldSpec, grid: &Grid) -> f64 {
    let r = spec.radius();
    match spec.kind() {
        ManifoldKind::Sphere => 2.0 * r,
        ManifoldKind::Pseudosphere => r * (grid.theta_max().cosh() - 1.0),
        ManifoldKind::Torus => 2.0 * PI * spec.central_radius().unwrap_or(0.0),
    }
}

fn normalization_factor(spec: &ManifoldSpec, rotor: &RotorParams, grid: &Grid, norm: NormConvention) -> f64 {
    let angular = 4.0 * PI * PI;
    let base = weight_integral(spec, grid);
    // measure C h dθ dφ dψ
    let c = match (norm, spec.kind()) {
        (NormConvention::UnitVolume, _) => 1.0 / (angular * base),
        (NormConvention::GeometricVolume, ManifoldKind::Sphere) => {
            2.0 * PI * PI * spec.radius().powi(3) / (angular * base)
        }
        (NormConvention::GeometricVolume, _) => (rotor.inertia() / rotor.mass()).sqrt() * spec.radius(),
    };
    1.0 / (angular * c).sqrt()
}

/// Table of spectra keyed by `(m, s)`; failing cells keep their error.
#[derive(Debug, Default)]
pub struct ScanTable {
    pub cells: BTreeMap<(i64, i64), Result<SpectrumResult>>,
}

impl ScanTable {
    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn get(&self, m: i64, s: i64) -> Option<&Result<SpectrumResult>> {
        self.cells.get(&(m, s))
    }
}

/// Independent solves over `m_range × s_range`, run on at most `threads`
/// workers (all available cores when `None`).
#[allow(clippy::too_many_arguments)]
pub fn spectrum_scan(
    spec: &ManifoldSpec,
    rotor: &RotorParams,
    m_range: RangeInclusive<i64>,
    s_range: RangeInclusive<i64>,
    potential: &PotentialSpec,
    grid: &Grid,
    k: usize,
    norm: NormConvention,
    threads: Option<usize>,
) -> Result<ScanTable> {
    let cells: Vec<(i64, i64)> = m_range
        .flat_map(|m| s_range.clone().map(move |s| (m, s)))
        .collect();
    if cells.is_empty() {
        return Ok(ScanTable::default());
    }
    let solve = || -> Vec<((i64, i64), Result<SpectrumResult>)> {
        cells
            .par_iter()
            .map(|&(m, s)| ((m, s), solve_spectrum(spec, rotor, m, s, potential, grid, k, norm)))
            .collect()
    };
    let results = match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| Error::InvalidParameter(format!("cannot build worker pool: {e}")))?
            .install(solve),
        None => solve(),
    };
    Ok(ScanTable {
        cells: results.into_iter().collect(),
    })
}
