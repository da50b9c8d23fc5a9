//! Lowest eigenpairs of symmetric tridiagonal matrices, optionally with the
//! two corner entries that close a periodic chain.
//!
//! Eigenvalues come from bisection on the inertia of `A - σI`. The inertia is
//! read from the pivots of an `LDLᵀ` elimination in natural order; with a
//! corner entry the only fill-in is the last row, so the count stays `O(n)`.
//! Eigenvectors come from inverse iteration at the converged shifts,
//! re-orthogonalized against earlier vectors so that degenerate levels get
//! independent vectors.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Symmetric matrix with diagonal `diag`, first off-diagonal `off` and an
/// optional coupling `corner` between the first and last rows.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
    corner: f64,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        Self::with_corner(diag, off, 0.0)
    }

    /// Periodic chains need at least three rows so the corner is a separate entry.
    pub fn with_corner(diag: Vec<f64>, off: Vec<f64>, corner: f64) -> Result<Self> {
        let n = diag.len();
        if n == 0 {
            return Err(Error::InvalidParameter("matrix must have at least one row".into()));
        }
        if off.len() != n - 1 {
            return Err(Error::InvalidParameter(format!(
                "off-diagonal has length {}, expected {}",
                off.len(),
                n - 1
            )));
        }
        if corner != 0.0 && n < 3 {
            return Err(Error::InvalidParameter("corner coupling needs at least three rows".into()));
        }
        if diag.iter().chain(&off).chain(std::iter::once(&corner)).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("matrix has non-finite entries".into()));
        }
        Ok(Self { diag, off, corner })
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    pub fn corner(&self) -> f64 {
        self.corner
    }

    pub fn has_corner(&self) -> bool {
        self.corner != 0.0
    }

    /// Dense copy; symmetric by construction.
    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.n();
        let mut a = DMatrix::zeros(n, n);
        for i in 0..n {
            a[(i, i)] = self.diag[i];
        }
        for (i, &b) in self.off.iter().enumerate() {
            a[(i, i + 1)] = b;
            a[(i + 1, i)] = b;
        }
        if self.has_corner() {
            a[(0, n - 1)] += self.corner;
            a[(n - 1, 0)] += self.corner;
        }
        a
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n();
        let mut y: Vec<f64> = self.diag.iter().zip(x).map(|(d, v)| d * v).collect();
        for (i, &b) in self.off.iter().enumerate() {
            y[i] += b * x[i + 1];
            y[i + 1] += b * x[i];
        }
        if self.has_corner() {
            y[0] += self.corner * x[n - 1];
            y[n - 1] += self.corner * x[0];
        }
        y
    }

    /// Maximum absolute row sum, the ∞-norm of the matrix.
    pub fn norm_inf(&self) -> f64 {
        self.gershgorin_rows().map(|(c, r)| c.abs() + r).fold(0.0, f64::max)
    }

    fn gershgorin_rows(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let n = self.n();
        (0..n).map(move |i| {
            let mut radius = 0.0;
            if i > 0 {
                radius += self.off[i - 1].abs();
            }
            if i + 1 < n {
                radius += self.off[i].abs();
            }
            if self.has_corner() && (i == 0 || i == n - 1) {
                radius += self.corner.abs();
            }
            (self.diag[i], radius)
        })
    }

    /// Interval containing the whole spectrum.
    pub fn gershgorin_bounds(&self) -> (f64, f64) {
        self.gershgorin_rows()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (c, r)| (lo.min(c - r), hi.max(c + r)))
    }

    /// Coupling of row `i` to the last row before elimination.
    fn last_coupling(&self, i: usize) -> f64 {
        let n = self.n();
        let mut u = 0.0;
        if i + 2 == n {
            u += self.off[i];
        }
        if i == 0 {
            u += self.corner;
        }
        u
    }

    /// Number of eigenvalues strictly below `sigma` (Sylvester's law of inertia).
    pub fn count_below(&self, sigma: f64) -> usize {
        let n = self.n();
        let pivmin = f64::MIN_POSITIVE.sqrt().max(f64::EPSILON * f64::EPSILON * self.norm_inf());
        let guard = |p: f64| if p.abs() < pivmin { -pivmin } else { p };
        if n == 1 {
            return usize::from(self.diag[0] - sigma < 0.0);
        }
        let mut count = 0;
        let mut pivot = guard(self.diag[0] - sigma);
        let mut u = self.last_coupling(0);
        let mut last = self.diag[n - 1] - sigma;
        for i in 0..n - 1 {
            if pivot < 0.0 {
                count += 1;
            }
            last -= u * u / pivot;
            if i + 2 < n {
                let b = self.off[i];
                let next_pivot = guard(self.diag[i + 1] - sigma - b * b / pivot);
                u = self.last_coupling(i + 1) - b * u / pivot;
                pivot = next_pivot;
            }
        }
        if last < 0.0 || last.abs() < pivmin {
            count += 1;
        }
        count
    }

    /// Solves `(A - sigma I) x = rhs` by the same bordered elimination, with
    /// tiny pivots replaced by a small positive value.
    pub fn solve_shifted(&self, sigma: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.n();
        let pivmin = (f64::EPSILON * self.norm_inf()).max(f64::MIN_POSITIVE.sqrt());
        let guard = |p: f64| if p.abs() < pivmin { pivmin.copysign(p) } else { p };
        if n == 1 {
            return vec![rhs[0] / guard(self.diag[0] - sigma)];
        }
        let mut pivots = vec![0.0; n];
        let mut border = vec![0.0; n];
        let mut z = rhs.to_vec();
        pivots[0] = guard(self.diag[0] - sigma);
        border[0] = self.last_coupling(0);
        let mut last = self.diag[n - 1] - sigma;
        for i in 0..n - 1 {
            let p = pivots[i];
            last -= border[i] * border[i] / p;
            z[n - 1] -= border[i] / p * z[i];
            if i + 2 < n {
                let b = self.off[i];
                pivots[i + 1] = guard(self.diag[i + 1] - sigma - b * b / p);
                border[i + 1] = self.last_coupling(i + 1) - b * border[i] / p;
                z[i + 1] -= b / p * z[i];
            }
        }
        let mut x = vec![0.0; n];
        x[n - 1] = z[n - 1] / guard(last);
        x[n - 2] = (z[n - 2] - border[n - 2] * x[n - 1]) / pivots[n - 2];
        for i in (0..n.saturating_sub(2)).rev() {
            x[i] = (z[i] - self.off[i] * x[i + 1] - border[i] * x[n - 1]) / pivots[i];
        }
        x
    }
}

/// Ascending eigenvalues with unit-norm eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

/// Residual bound per pair, relative to `‖A‖∞`.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

/// The `k` smallest eigenpairs with `‖Av - λv‖ ≤ 1e-10 ‖A‖` for each pair.
pub fn eigen_symmetric(matrix: &SymTridiagonal, k: usize) -> Result<EigenPairs> {
    let n = matrix.n();
    if k > n {
        return Err(Error::InvalidParameter(format!("requested {k} eigenpairs of a {n}x{n} matrix")));
    }
    if k == 0 {
        return Ok(EigenPairs {
            values: Vec::new(),
            vectors: Vec::new(),
        });
    }
    match bisection_inverse_iteration(matrix, k) {
        Ok(pairs) => Ok(pairs),
        Err(first) if matrix.has_corner() => dense_lowest(matrix, k).map_err(|_| first),
        Err(e) => Err(e),
    }
}

fn bisection_inverse_iteration(matrix: &SymTridiagonal, k: usize) -> Result<EigenPairs> {
    let n = matrix.n();
    let norm = matrix.norm_inf().max(f64::MIN_POSITIVE);
    let (lo, hi) = matrix.gershgorin_bounds();
    let (lo, hi) = (lo - f64::EPSILON * norm, hi + f64::EPSILON * norm);

    let mut values = Vec::with_capacity(k);
    let mut lower = lo;
    for j in 0..k {
        // smallest x with count_below(x) > j
        let (mut a, mut b) = (lower, hi);
        let mut iterations = 0;
        while b - a > 2.0 * f64::EPSILON * (a.abs().max(b.abs())) + f64::EPSILON * norm * 1e-3 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if matrix.count_below(mid) > j {
                b = mid;
            } else {
                a = mid;
            }
            iterations += 1;
            if iterations > 400 {
                return Err(Error::ConvergenceFailure(format!(
                    "bisection for eigenvalue {j} did not converge after {iterations} steps (bracket [{a}, {b}])"
                )));
            }
        }
        let value = 0.5 * (a + b);
        values.push(value);
        lower = a;
    }

    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(k);
    for (j, &value) in values.iter().enumerate() {
        let mut x = start_vector(n, j);
        let mut residual = f64::INFINITY;
        for _sweep in 0..8 {
            x = matrix.solve_shifted(value, &x);
            for prev in &vectors {
                let proj = dot(prev, &x);
                for (xi, pi) in x.iter_mut().zip(prev) {
                    *xi -= proj * pi;
                }
            }
            let nrm = dot(&x, &x).sqrt();
            if !nrm.is_finite() || nrm == 0.0 {
                return Err(Error::ConvergenceFailure(format!(
                    "inverse iteration for eigenvalue {j} ({value}) produced a degenerate vector"
                )));
            }
            x.iter_mut().for_each(|v| *v /= nrm);
            residual = residual_norm(matrix, value, &x);
            if residual <= 0.1 * RESIDUAL_TOLERANCE * norm {
                break;
            }
        }
        if residual > RESIDUAL_TOLERANCE * norm {
            return Err(Error::ConvergenceFailure(format!(
                "eigenpair {j} ({value}) has residual {residual:e} > {:e}",
                RESIDUAL_TOLERANCE * norm
            )));
        }
        fix_sign(&mut x);
        vectors.push(x);
    }
    Ok(EigenPairs { values, vectors })
}

fn dense_lowest(matrix: &SymTridiagonal, k: usize) -> Result<EigenPairs> {
    let eig = SymmetricEigen::try_new(matrix.to_dense(), f64::EPSILON, 0)
        .ok_or_else(|| Error::ConvergenceFailure("dense symmetric eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..matrix.n()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut values = Vec::with_capacity(k);
    let mut vectors = Vec::with_capacity(k);
    for &idx in order.iter().take(k) {
        values.push(eig.eigenvalues[idx]);
        let mut v: Vec<f64> = eig.eigenvectors.column(idx).iter().copied().collect();
        fix_sign(&mut v);
        vectors.push(v);
    }
    Ok(EigenPairs { values, vectors })
}

/// Deterministic, non-degenerate starting vector.
fn start_vector(n: usize, j: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let t = (i as f64 + 1.0) * 0.618_033_988_749_895 + (j as f64) * 0.414_213_562_373_095;
            1.0 + 0.5 * (t.fract() - 0.5)
        })
        .collect()
}

/// Largest-magnitude component made positive, for reproducible output.
fn fix_sign(x: &mut [f64]) {
    let pivot = x.iter().copied().fold(0.0f64, |acc, v| if v.abs() > acc.abs() { v } else { acc });
    if pivot < 0.0 {
        x.iter_mut().for_each(|v| *v = -*v);
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `‖A x - λ x‖₂`.
pub fn residual_norm(matrix: &SymTridiagonal, value: f64, x: &[f64]) -> f64 {
    matrix
        .mul_vec(x)
        .iter()
        .zip(x)
        .map(|(ax, xi)| (ax - value * xi).powi(2))
        .sum::<f64>()
        .sqrt()
}
