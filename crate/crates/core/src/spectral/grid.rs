use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::geometry::ThetaDomain;

pub const MIN_NODES: usize = 16;
pub const DEFAULT_CELL_CENTERED_NODES: usize = 2000;
pub const DEFAULT_PERIODIC_NODES: usize = 1024;
pub const DEFAULT_THETA_MAX: f64 = 12.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// Nodes at `θ_min + (i + ½) δ`; no node sits on an endpoint.
    CellCentered,
    /// Nodes at `i δ` on `[0, 2π)`.
    Periodic,
}

impl Layout {
    pub fn name(self) -> &'static str {
        match self {
            Layout::CellCentered => "cell-centered",
            Layout::Periodic => "periodic",
        }
    }
}

/// Uniform latitude grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    layout: Layout,
    theta_min: f64,
    theta_max: f64,
    spacing: f64,
    nodes: Vec<f64>,
}

impl Grid {
    pub fn cell_centered(n: usize, theta_min: f64, theta_max: f64) -> Result<Self> {
        check_count(n)?;
        if !(theta_min.is_finite() && theta_max.is_finite() && theta_max > theta_min) {
            return Err(Error::InvalidParameter(format!(
                "grid interval [{theta_min}, {theta_max}] is empty or not finite"
            )));
        }
        let spacing = (theta_max - theta_min) / n as f64;
        let nodes = (0..n).map(|i| theta_min + (i as f64 + 0.5) * spacing).collect();
        Ok(Self {
            layout: Layout::CellCentered,
            theta_min,
            theta_max,
            spacing,
            nodes,
        })
    }

    pub fn periodic(n: usize) -> Result<Self> {
        check_count(n)?;
        let spacing = TAU / n as f64;
        Ok(Self {
            layout: Layout::Periodic,
            theta_min: 0.0,
            theta_max: TAU,
            spacing,
            nodes: (0..n).map(|i| i as f64 * spacing).collect(),
        })
    }

    /// Grid matching a latitude domain. `n` defaults per layout; `theta_max`
    /// is the truncation bound of the half line and is ignored elsewhere.
    pub fn for_domain(domain: ThetaDomain, n: Option<usize>, theta_max: Option<f64>) -> Result<Self> {
        match domain {
            ThetaDomain::Periodic => Self::periodic(n.unwrap_or(DEFAULT_PERIODIC_NODES)),
            ThetaDomain::Polar => {
                let (lo, hi) = domain.bounds();
                Self::cell_centered(n.unwrap_or(DEFAULT_CELL_CENTERED_NODES), lo, hi)
            }
            ThetaDomain::HalfLine => {
                let hi = theta_max.unwrap_or(DEFAULT_THETA_MAX);
                if !(hi > 0.0 && hi.is_finite()) {
                    return Err(Error::InvalidParameter(format!("theta_max must be positive, got {hi}")));
                }
                Self::cell_centered(n.unwrap_or(DEFAULT_CELL_CENTERED_NODES), 0.0, hi)
            }
        }
    }

    /// Same interval and layout with `n` nodes.
    pub fn with_nodes(&self, n: usize) -> Result<Self> {
        match self.layout {
            Layout::CellCentered => Self::cell_centered(n, self.theta_min, self.theta_max),
            Layout::Periodic => Self::periodic(n),
        }
    }

    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn theta_min(&self) -> f64 {
        self.theta_min
    }

    pub fn theta_max(&self) -> f64 {
        self.theta_max
    }

    /// Cell faces: `n + 1` for cell-centred grids, `n` (right faces) for periodic.
    pub fn faces(&self) -> Vec<f64> {
        match self.layout {
            Layout::CellCentered => (0..=self.n())
                .map(|i| self.theta_min + i as f64 * self.spacing)
                .collect(),
            Layout::Periodic => (0..self.n()).map(|i| (i as f64 + 0.5) * self.spacing).collect(),
        }
    }
}

fn check_count(n: usize) -> Result<()> {
    if n < MIN_NODES {
        return Err(Error::InvalidParameter(format!(
            "grid needs at least {MIN_NODES} nodes, got {n}"
        )));
    }
    Ok(())
}
