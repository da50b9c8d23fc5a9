//! Laplace–Beltrami operator of the configuration metric and its reduction
//! to a one-dimensional radial problem.
//!
//! For `Ψ = f(θ) e^{imφ} e^{isψ}` the Schrödinger equation
//! `-(ħ²/2M) ΔΨ + V(θ) Ψ = E Ψ`, after dividing out the angular factors and
//! multiplying by `2MR²/ħ²`, becomes
//!
//! ```text
//! f'' + drift(θ) f' - q(θ) f + ε f = 0,    ε = (2MR²/ħ²) E
//! ```
//!
//! with `drift = h'/h`. The operator `-(1/h)(h f')' + q f` is symmetric in
//! `L²(h dθ)`, which is what the spectral solver exploits.

use crate::error::{Error, Result};
use crate::geometry::{metric_tensor, profile, ManifoldKind, ManifoldSpec, RotorParams, ThetaDomain};
use crate::potential::PotentialSpec;

/// Coefficients of `Δ = a_tt ∂θ² + b_t ∂θ + a_pp ∂φ² + a_ps ∂φ∂ψ + a_ss ∂ψ²`.
///
/// `a_ps` already contains the factor 2 of the mixed derivative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplacianCoefficients {
    pub a_tt: f64,
    pub a_pp: f64,
    pub a_ps: f64,
    pub a_ss: f64,
    pub b_t: f64,
}

/// `(1/√|G|) ∂_i (√|G| G^{ij} ∂_j)` expanded for a metric depending on θ only.
pub fn laplacian_coefficients(spec: &ManifoldSpec, rotor: &RotorParams, theta: f64) -> Result<LaplacianCoefficients> {
    let field = metric_tensor(spec, rotor, theta)?;
    let p = profile(spec, theta)?;
    // d√|G|/dθ; G^θθ is constant
    let scale = (rotor.inertia() / rotor.mass()).sqrt() * spec.radius();
    let d_sqrt_det = scale * p.h.signum() * p.dh;
    let gi = field.g_inv;
    Ok(LaplacianCoefficients {
        a_tt: gi[(0, 0)],
        a_pp: gi[(1, 1)],
        a_ps: 2.0 * gi[(1, 2)],
        a_ss: gi[(2, 2)],
        b_t: d_sqrt_det * gi[(0, 0)] / field.sqrt_abs_det,
    })
}

/// Boundary behaviour at one end of the latitude interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    /// Coordinate pole where `h → 0`; the regular solution is selected.
    Pole,
    /// Artificial cut of an infinite domain, Dirichlet.
    Truncated,
    Periodic,
}

/// Separated radial equation for fixed quantum numbers `(m, s)`.
#[derive(Debug, Clone)]
pub struct RadialProblem {
    spec: ManifoldSpec,
    rotor: RotorParams,
    m: i64,
    s: i64,
    potential: PotentialSpec,
    energy_scale: f64,
}

pub fn radial_problem(
    spec: &ManifoldSpec,
    rotor: &RotorParams,
    m: i64,
    s: i64,
    potential: &PotentialSpec,
) -> Result<RadialProblem> {
    rotor.check_compatible(spec)?;
    let potential = potential.clone().prepared()?;
    let r = spec.radius();
    Ok(RadialProblem {
        spec: *spec,
        rotor: *rotor,
        m,
        s,
        potential,
        energy_scale: 2.0 * rotor.mass() * r * r / (rotor.hbar() * rotor.hbar()),
    })
}

impl RadialProblem {
    pub fn spec(&self) -> &ManifoldSpec {
        &self.spec
    }

    pub fn rotor(&self) -> &RotorParams {
        &self.rotor
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn s(&self) -> i64 {
        self.s
    }

    pub fn potential(&self) -> &PotentialSpec {
        &self.potential
    }

    /// `2MR²/ħ²`: converts energies to the dimensionless eigenvalue `ε`.
    pub fn energy_scale(&self) -> f64 {
        self.energy_scale
    }

    pub fn endpoints(&self) -> (Endpoint, Endpoint) {
        match self.spec.kind() {
            ManifoldKind::Sphere => (Endpoint::Pole, Endpoint::Pole),
            ManifoldKind::Pseudosphere => (Endpoint::Pole, Endpoint::Truncated),
            ManifoldKind::Torus => (Endpoint::Periodic, Endpoint::Periodic),
        }
    }

    /// Sturm–Liouville weight `h(θ)`, positive inside the domain.
    pub fn weight(&self, theta: f64) -> f64 {
        self.spec.h_derivatives(theta).0
    }

    /// `h'/h`: `cot θ`, `coth θ`, or `-R sin θ / (L + R cos θ)`.
    pub fn drift(&self, theta: f64) -> f64 {
        let (h, dh, _) = self.spec.h_derivatives(theta);
        dh / h
    }

    /// `V(θ)` with the surface's chart convention.
    pub fn potential_at(&self, theta: f64) -> f64 {
        self.potential.value_on(self.spec.theta_domain(), theta)
    }

    /// Effective potential without `V`: `R²(m - s c)²/h² + R² s² M/(sig I)`.
    ///
    /// Equal to `R²(m² a_pp + m s a_ps + s² a_ss)`, regrouped so that the
    /// centrifugal cancellation near a pole happens before the division.
    pub fn q_geometric(&self, theta: f64) -> f64 {
        let r2 = self.spec.radius().powi(2);
        let (h, _, _) = self.spec.h_derivatives(theta);
        let (c, _) = self.spec.c_derivatives(theta);
        let (m, s) = (self.m as f64, self.s as f64);
        let orbital = m - s * c;
        r2 * orbital * orbital / (h * h) + r2 * s * s / self.rotor.rotational_ratio()
    }

    /// Full effective potential `q = q_geometric + (2MR²/ħ²) V`.
    pub fn q(&self, theta: f64) -> f64 {
        self.q_geometric(theta) + self.energy_scale * self.potential_at(theta)
    }

    /// Value of `c` at a pole, which fixes the centrifugal strength `(m - s c_pole)²`.
    pub fn pole_coupling(&self, at_start: bool) -> Option<f64> {
        match (self.spec.kind(), at_start) {
            (ManifoldKind::Sphere, true) | (ManifoldKind::Pseudosphere, true) => Some(1.0),
            (ManifoldKind::Sphere, false) => Some(-1.0),
            _ => None,
        }
    }

    /// `f'' + drift f' - q f` by central differences with step `step`.
    pub fn apply<F: Fn(f64) -> f64>(&self, f: F, theta: f64, step: f64) -> f64 {
        let (fm, f0, fp) = (f(theta - step), f(theta), f(theta + step));
        let d2 = (fp - 2.0 * f0 + fm) / (step * step);
        let d1 = (fp - fm) / (2.0 * step);
        d2 + self.drift(theta) * d1 - self.q(theta) * f0
    }

    pub fn domain(&self) -> ThetaDomain {
        self.spec.theta_domain()
    }
}

/// `Δ(f e^{imφ} e^{isψ}) / (e^{imφ} e^{isψ})` at `theta`, with θ-derivatives
/// by central differences of step `step` and exact φ, ψ derivatives.
///
/// The step is validated by two halvings: unless the change is already at
/// rounding level, successive differences must shrink by a factor near four.
pub fn apply_separated<F: Fn(f64) -> f64>(
    spec: &ManifoldSpec,
    rotor: &RotorParams,
    m: i64,
    s: i64,
    f: F,
    theta: f64,
    step: f64,
) -> Result<f64> {
    if step.is_nan() || step <= 0.0 {
        return Err(Error::InvalidParameter(format!("step must be positive, got {step}")));
    }
    let coeffs = laplacian_coefficients(spec, rotor, theta)?;
    let (m, s) = (m as f64, s as f64);
    let angular = -(m * m * coeffs.a_pp + m * s * coeffs.a_ps + s * s * coeffs.a_ss);
    let eval = |d: f64| {
        let (fm, f0, fp) = (f(theta - d), f(theta), f(theta + d));
        coeffs.a_tt * (fp - 2.0 * f0 + fm) / (d * d) + coeffs.b_t * (fp - fm) / (2.0 * d) + angular * f0
    };
    let (v1, v2, v4) = (eval(step), eval(step / 2.0), eval(step / 4.0));
    let (d12, d24) = ((v1 - v2).abs(), (v2 - v4).abs());
    let finest = step / 4.0;
    let noise = 1e3 * f64::EPSILON * (1.0 + f(theta).abs()) * coeffs.a_tt.abs() / (finest * finest);
    if d12 > noise && d24 > noise {
        let ratio = d12 / d24;
        if !(3.0..=5.0).contains(&ratio) {
            return Err(Error::GridTooCoarse { ratio });
        }
    }
    Ok(v1)
}
