//! Conservative finite-volume discretization of `-(1/h)(h f')' + q f = ε f`.
//!
//! With `g = √h f` the three-point flux stencil becomes the symmetric matrix
//!
//! ```text
//! A_ii      = (h_{i+½} + h_{i-½}) / (h_i δ²) + q_i
//! A_{i,i±1} = -h_{i±½} / (√(h_i h_{i±1}) δ²)
//! ```
//!
//! A face on a pole has `h = 0`, so no flux crosses it. A truncation face
//! uses the odd ghost value `f_ghost = -f_last` (Dirichlet on the face).

use super::eigen::SymTridiagonal;
use super::grid::{Grid, Layout};
use crate::error::{Error, Result};
use crate::operators::{Endpoint, RadialProblem};

/// How the outermost faces of a cell-centred grid are closed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceClosure {
    /// Flux through the face is `h_face (f_out - f_in)/δ`, zero when `h_face = 0`.
    ZeroFlux,
    Dirichlet,
}

/// Assembles the symmetric matrix from weights at nodes and faces.
///
/// `h_faces` has `n + 1` entries for cell-centred grids (face `i` sits left of
/// node `i`) and `n` entries for periodic ones (face `i` sits right of node `i`,
/// the last one wraps to node 0).
pub fn conservative_matrix(
    h_nodes: &[f64],
    h_faces: &[f64],
    q: &[f64],
    spacing: f64,
    layout: Layout,
    closures: (FaceClosure, FaceClosure),
) -> Result<SymTridiagonal> {
    let n = h_nodes.len();
    let inv_d2 = 1.0 / (spacing * spacing);
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n.saturating_sub(1)];
    let mut corner = 0.0;
    match layout {
        Layout::CellCentered => {
            debug_assert_eq!(h_faces.len(), n + 1);
            let face_factor = |closure: FaceClosure| match closure {
                FaceClosure::ZeroFlux => 1.0,
                FaceClosure::Dirichlet => 2.0,
            };
            for i in 0..n {
                let left = if i == 0 { face_factor(closures.0) * h_faces[0] } else { h_faces[i] };
                let right = if i == n - 1 { face_factor(closures.1) * h_faces[n] } else { h_faces[i + 1] };
                diag[i] = (left + right) / h_nodes[i] * inv_d2 + q[i];
            }
            for i in 0..n.saturating_sub(1) {
                off[i] = -h_faces[i + 1] / (h_nodes[i] * h_nodes[i + 1]).sqrt() * inv_d2;
            }
        }
        Layout::Periodic => {
            debug_assert_eq!(h_faces.len(), n);
            for i in 0..n {
                let left = h_faces[(i + n - 1) % n];
                let right = h_faces[i];
                diag[i] = (left + right) / h_nodes[i] * inv_d2 + q[i];
            }
            for i in 0..n - 1 {
                off[i] = -h_faces[i] / (h_nodes[i] * h_nodes[i + 1]).sqrt() * inv_d2;
            }
            corner = -h_faces[n - 1] / (h_nodes[n - 1] * h_nodes[0]).sqrt() * inv_d2;
        }
    }
    if let Some(i) = diag.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteCoefficient {
            index: i,
            theta: f64::NAN,
        });
    }
    SymTridiagonal::with_corner(diag, off, corner)
}

/// Symmetric matrix of the radial problem on `grid`, acting on `g = √h f`.
pub fn discretize(problem: &RadialProblem, grid: &Grid) -> Result<SymTridiagonal> {
    let endpoints = problem.endpoints();
    let compatible = match grid.layout() {
        Layout::Periodic => endpoints == (Endpoint::Periodic, Endpoint::Periodic),
        Layout::CellCentered => endpoints.0 != Endpoint::Periodic && endpoints.1 != Endpoint::Periodic,
    };
    if !compatible {
        return Err(Error::IncompatibleLayout {
            layout: grid.layout().name(),
        });
    }
    let nodes = grid.nodes();
    let h_nodes: Vec<f64> = nodes.iter().map(|&t| problem.weight(t)).collect();
    let mut q = Vec::with_capacity(nodes.len());
    for (index, &theta) in nodes.iter().enumerate() {
        let value = problem.q(theta);
        if !value.is_finite() {
            return Err(Error::NonFiniteCoefficient { index, theta });
        }
        q.push(value);
    }
    let faces = grid.faces();
    let mut h_faces: Vec<f64> = faces.iter().map(|&t| problem.weight(t)).collect();
    let closure = |e: Endpoint| match e {
        Endpoint::Truncated => FaceClosure::Dirichlet,
        _ => FaceClosure::ZeroFlux,
    };
    if grid.layout() == Layout::CellCentered {
        // poles carry exactly zero weight
        if endpoints.0 == Endpoint::Pole {
            h_faces[0] = 0.0;
        }
        if endpoints.1 == Endpoint::Pole {
            let last = h_faces.len() - 1;
            h_faces[last] = 0.0;
        }
    }
    conservative_matrix(
        &h_nodes,
        &h_faces,
        &q,
        grid.spacing(),
        grid.layout(),
        (closure(endpoints.0), closure(endpoints.1)),
    )
    .map_err(|e| match e {
        Error::NonFiniteCoefficient { index, .. } => Error::NonFiniteCoefficient {
            index,
            theta: nodes[index],
        },
        other => other,
    })
}
