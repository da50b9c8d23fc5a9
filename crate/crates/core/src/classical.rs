//! Classical motion on the configuration space: Legendre map, Hamiltonian,
//! implicit-midpoint trajectories and the Hamilton–Jacobi reduction in θ.
//!
//! Conventions follow `T = (M/2) G_ij q̇^i q̇^j`, so `p = M G q̇` and
//! `H = (1/2M) G^{ij} p_i p_j + V(θ)`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::Vector3;

use crate::error::{Error, Result};
use crate::geometry::{metric_tensor, ManifoldKind, ManifoldSpec, RotorParams, ThetaDomain};
use crate::potential::PotentialSpec;
use crate::quadrature;
use crate::spectral::DEFAULT_THETA_MAX;

/// Trajectories stop once `|h|` falls below this multiple of `R`.
pub const POLE_GUARD: f64 = 1e-6;
/// Relative convergence of the implicit-midpoint fixed point.
pub const MIDPOINT_TOLERANCE: f64 = 1e-13;
const MAX_MIDPOINT_ITERATIONS: usize = 200;

/// Phase-space point: `q = (θ, φ, ψ)`, `p = (p_θ, p_φ, p_ψ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State {
    pub q: Vector3<f64>,
    pub p: Vector3<f64>,
}

impl State {
    pub fn new(q: Vector3<f64>, p: Vector3<f64>) -> Self {
        Self { q, p }
    }

    pub fn theta(&self) -> f64 {
        self.q.x
    }
}

/// Samples of an integrated trajectory. Drifts are relative to the initial
/// value, or absolute when that value is zero.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    pub states: Vec<State>,
    pub energies: Vec<f64>,
    pub energy_drift: Vec<f64>,
    pub p_phi_drift: Vec<f64>,
    pub p_psi_drift: Vec<f64>,
}

impl TrajectoryRecord {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn max_energy_drift(&self) -> f64 {
        max_abs(&self.energy_drift)
    }

    pub fn max_p_phi_drift(&self) -> f64 {
        max_abs(&self.p_phi_drift)
    }

    pub fn max_p_psi_drift(&self) -> f64 {
        max_abs(&self.p_psi_drift)
    }

    fn push(&mut self, time: f64, state: State, energy: f64) {
        let (e0, a0, b0) = match self.states.first() {
            Some(first) => (self.energies[0], first.p.y, first.p.z),
            None => (energy, state.p.y, state.p.z),
        };
        self.times.push(time);
        self.states.push(state);
        self.energies.push(energy);
        self.energy_drift.push(drift(energy, e0));
        self.p_phi_drift.push(drift(state.p.y, a0));
        self.p_psi_drift.push(drift(state.p.z, b0));
    }
}

fn drift(value: f64, reference: f64) -> f64 {
    if reference == 0.0 {
        value - reference
    } else {
        (value - reference) / reference.abs()
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `p = M G q̇` with `rates = (θ̇, φ̇, ψ̇)`.
pub fn momenta_from_rates(
    spec: &ManifoldSpec,
    rotor: &RotorParams,
    theta: f64,
    rates: &Vector3<f64>,
) -> Result<Vector3<f64>> {
    let metric = metric_tensor(spec, rotor, theta)?;
    Ok(metric.g * rates * rotor.mass())
}

/// `q̇ = G⁻¹ p / M`.
pub fn rates_from_momenta(
    spec: &ManifoldSpec,
    rotor: &RotorParams,
    theta: f64,
    momenta: &Vector3<f64>,
) -> Result<Vector3<f64>> {
    let metric = metric_tensor(spec, rotor, theta)?;
    Ok(metric.g_inv * momenta / rotor.mass())
}

/// `T = (M/2) G_ij q̇^i q̇^j`.
pub fn kinetic_energy(spec: &ManifoldSpec, rotor: &RotorParams, theta: f64, rates: &Vector3<f64>) -> Result<f64> {
    let metric = metric_tensor(spec, rotor, theta)?;
    Ok(0.5 * rotor.mass() * rates.dot(&(metric.g * rates)))
}

pub fn hamiltonian(spec: &ManifoldSpec, rotor: &RotorParams, potential: &PotentialSpec, state: &State) -> Result<f64> {
    let metric = metric_tensor(spec, rotor, state.theta())?;
    let kinetic = 0.5 * state.p.dot(&(metric.g_inv * state.p)) / rotor.mass();
    Ok(kinetic + potential.value_on(spec.theta_domain(), state.theta()))
}

/// Closed-form `G^{ij}` and `dG^{ij}/dθ` without domain checks.
#[derive(Debug, Clone, Copy)]
struct InverseMetric {
    tt: f64,
    pp: f64,
    ps: f64,
    ss: f64,
    d_pp: f64,
    d_ps: f64,
    d_ss: f64,
}

fn inverse_metric(spec: &ManifoldSpec, rotor: &RotorParams, theta: f64) -> InverseMetric {
    let r = spec.radius();
    let (h, dh, _) = spec.h_derivatives(theta);
    let (c, dc) = spec.c_derivatives(theta);
    let (h2, h3) = (h * h, h * h * h);
    InverseMetric {
        tt: 1.0 / (r * r),
        pp: 1.0 / h2,
        ps: -c / h2,
        ss: 1.0 / rotor.rotational_ratio() + c * c / h2,
        d_pp: -2.0 * dh / h3,
        d_ps: -dc / h2 + 2.0 * c * dh / h3,
        d_ss: 2.0 * c * dc / h2 - 2.0 * c * c * dh / h3,
    }
}

/// Hamilton's vector field `(q̇, ṗ)`; `ṗ_φ = ṗ_ψ = 0` identically.
fn vector_field(
    spec: &ManifoldSpec,
    rotor: &RotorParams,
    potential: &PotentialSpec,
    q: &Vector3<f64>,
    p: &Vector3<f64>,
) -> (Vector3<f64>, Vector3<f64>) {
    let g = inverse_metric(spec, rotor, q.x);
    let inv_m = 1.0 / rotor.mass();
    let dq = Vector3::new(
        g.tt * p.x * inv_m,
        (g.pp * p.y + g.ps * p.z) * inv_m,
        (g.ps * p.y + g.ss * p.z) * inv_m,
    );
    let angular = g.d_pp * p.y * p.y + 2.0 * g.d_ps * p.y * p.z + g.d_ss * p.z * p.z;
    let force = -0.5 * inv_m * angular - potential.derivative_on(spec.theta_domain(), q.x);
    (dq, Vector3::new(force, 0.0, 0.0))
}

/// `dp_θ/dt` at a state.
pub fn theta_force(spec: &ManifoldSpec, rotor: &RotorParams, potential: &PotentialSpec, state: &State) -> f64 {
    vector_field(spec, rotor, potential, &state.q, &state.p).1.x
}

fn near_pole(spec: &ManifoldSpec, theta: f64) -> bool {
    let guard = POLE_GUARD * spec.radius();
    match spec.theta_domain() {
        ThetaDomain::Periodic => false,
        domain => !domain.is_interior(theta) || spec.h_derivatives(theta).0.abs() < guard,
    }
}

/// Fixed-step implicit midpoint, `z₁ = z₀ + dt F((z₀ + z₁)/2)`, with the
/// fixed point iterated to [`MIDPOINT_TOLERANCE`].
///
/// The record holds `steps + 1` samples. On the torus θ is not wrapped.
pub fn integrate(
    spec: &ManifoldSpec,
    rotor: &RotorParams,
    potential: &PotentialSpec,
    state0: &State,
    dt: f64,
    steps: usize,
) -> Result<TrajectoryRecord> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParameter(format!("time step must be positive, got {dt}")));
    }
    rotor.check_compatible(spec)?;
    let potential = potential.clone().prepared()?;
    if near_pole(spec, state0.theta()) {
        return Err(Error::PoleApproach {
            time: 0.0,
            theta: state0.theta(),
            partial: Box::default(),
        });
    }

    let mut record = TrajectoryRecord::default();
    let energy = |s: &State| hamiltonian(spec, rotor, &potential, s);
    record.push(0.0, *state0, energy(state0)?);

    let mut current = *state0;
    for step in 1..=steps {
        let (q0, p0) = (current.q, current.p);
        let (dq, dp) = vector_field(spec, rotor, &potential, &q0, &p0);
        let (mut q1, mut p1) = (q0 + dq * dt, p0 + dp * dt);
        let mut converged = false;
        let mut residual = f64::INFINITY;
        for _ in 0..MAX_MIDPOINT_ITERATIONS {
            let qm = (q0 + q1) * 0.5;
            let pm = (p0 + p1) * 0.5;
            if near_pole(spec, qm.x) {
                break;
            }
            let (dq, dp) = vector_field(spec, rotor, &potential, &qm, &pm);
            let (q_next, p_next) = (q0 + dq * dt, p0 + dp * dt);
            residual = scaled_change(&q_next, &q1, &p_next, &p1);
            q1 = q_next;
            p1 = p_next;
            if residual <= MIDPOINT_TOLERANCE {
                converged = true;
                break;
            }
        }
        let time = step as f64 * dt;
        if near_pole(spec, q1.x) || near_pole(spec, 0.5 * (q0.x + q1.x)) {
            return Err(Error::PoleApproach {
                time,
                theta: q1.x,
                partial: Box::new(record),
            });
        }
        if !converged || !residual.is_finite() {
            return Err(Error::StepRejected { step, residual });
        }
        // the cyclic momenta have a vanishing vector field
        p1.y = p0.y;
        p1.z = p0.z;
        current = State::new(q1, p1);
        record.push(time, current, energy(&current)?);
    }
    Ok(record)
}

fn scaled_change(qa: &Vector3<f64>, qb: &Vector3<f64>, pa: &Vector3<f64>, pb: &Vector3<f64>) -> f64 {
    let rel = |a: f64, b: f64| (a - b).abs() / (1.0 + a.abs());
    (0..3)
        .map(|i| rel(qa[i], qb[i]).max(rel(pa[i], pb[i])))
        .fold(0.0, f64::max)
}

/// An event where `p_θ` changes sign along a trajectory: a θ-extremum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaExtremum {
    pub time: f64,
    pub theta: f64,
    /// True for a maximum of θ (`p_θ` going from positive to negative).
    pub maximum: bool,
}

/// Locates the θ-extrema of a trajectory by cubic Hermite interpolation of
/// `p_θ(t)` and `θ(t)` between samples.
pub fn theta_extrema(
    spec: &ManifoldSpec,
    rotor: &RotorParams,
    potential: &PotentialSpec,
    record: &TrajectoryRecord,
) -> Vec<ThetaExtremum> {
    let inv_mr2 = 1.0 / (rotor.mass() * spec.radius().powi(2));
    let mut events = Vec::new();
    let mut force_prev = None;
    for i in 1..record.len() {
        let (a, b) = (&record.states[i - 1], &record.states[i]);
        if a.p.x == 0.0 && i > 1 {
            force_prev = None;
            continue;
        }
        let fa = force_prev.unwrap_or_else(|| theta_force(spec, rotor, potential, a));
        let fb = theta_force(spec, rotor, potential, b);
        force_prev = Some(fb);
        let (pa, pb) = (a.p.x, b.p.x);
        if !(pa != 0.0 && (pa > 0.0) != (pb > 0.0)) {
            continue;
        }
        let (t0, t1) = (record.times[i - 1], record.times[i]);
        let h = t1 - t0;
        let p_at = |u: f64| hermite(pa, pb, fa * h, fb * h, u);
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if (p_at(mid) > 0.0) == (pa > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let u = 0.5 * (lo + hi);
        let theta = hermite(a.q.x, b.q.x, pa * inv_mr2 * h, pb * inv_mr2 * h, u);
        events.push(ThetaExtremum {
            time: t0 + u * h,
            theta,
            maximum: pa > 0.0,
        });
    }
    events
}

fn hermite(y0: f64, y1: f64, d0: f64, d1: f64, u: f64) -> f64 {
    let u2 = u * u;
    let u3 = u2 * u;
    (2.0 * u3 - 3.0 * u2 + 1.0) * y0 + (u3 - 2.0 * u2 + u) * d0 + (-2.0 * u3 + 3.0 * u2) * y1 + (u3 - u2) * d1
}

/// Mean θ-oscillation period over all complete cycles between θ-maxima.
pub fn measured_period(extrema: &[ThetaExtremum]) -> Option<f64> {
    let maxima: Vec<f64> = extrema.iter().filter(|e| e.maximum).map(|e| e.time).collect();
    if maxima.len() < 2 {
        return None;
    }
    Some((maxima[maxima.len() - 1] - maxima[0]) / (maxima.len() - 1) as f64)
}

/// Connected component of `{p_θ² ≥ 0}`. Ends that are not turning points are
/// domain ends (or, on the torus, the allowed set is the whole circle).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AllowedInterval {
    pub lo: f64,
    pub hi: f64,
    pub lo_turning: bool,
    pub hi_turning: bool,
}

impl AllowedInterval {
    /// Libration between two turning points.
    pub fn is_bound(&self) -> bool {
        self.lo_turning && self.hi_turning
    }
}

/// `p_θ(θ)` at fixed `E`, `μ = p_φ`, `σ = p_ψ`.
#[derive(Debug, Clone)]
pub struct RadialMomentum {
    spec: ManifoldSpec,
    rotor: RotorParams,
    potential: PotentialSpec,
    energy: f64,
    mu: f64,
    sigma: f64,
    intervals: Vec<AllowedInterval>,
}

/// Samples used to bracket turning points before bisection.
const SCAN_SAMPLES: usize = 4096;

/// Hamilton–Jacobi reduction: `p_θ² = 2MR²(E - V) - R²(G^{φφ}μ² + 2G^{φψ}μσ + G^{ψψ}σ²)`.
///
/// The half line of the pseudosphere is scanned up to [`DEFAULT_THETA_MAX`].
pub fn hj_radial_momentum(
    spec: &ManifoldSpec,
    rotor: &RotorParams,
    potential: &PotentialSpec,
    energy: f64,
    mu: f64,
    sigma: f64,
) -> Result<RadialMomentum> {
    hj_radial_momentum_within(spec, rotor, potential, energy, mu, sigma, DEFAULT_THETA_MAX)
}

/// As [`hj_radial_momentum`] with an explicit scan bound on the half line.
pub fn hj_radial_momentum_within(
    spec: &ManifoldSpec,
    rotor: &RotorParams,
    potential: &PotentialSpec,
    energy: f64,
    mu: f64,
    sigma: f64,
    theta_max: f64,
) -> Result<RadialMomentum> {
    for (name, v) in [("energy", energy), ("mu", mu), ("sigma", sigma)] {
        if !v.is_finite() {
            return Err(Error::InvalidParameter(format!("{name} must be finite, got {v}")));
        }
    }
    if spec.kind() == ManifoldKind::Pseudosphere && !(theta_max > 0.0 && theta_max.is_finite()) {
        return Err(Error::InvalidParameter(format!("theta_max must be positive, got {theta_max}")));
    }
    rotor.check_compatible(spec)?;
    let mut radial = RadialMomentum {
        spec: *spec,
        rotor: *rotor,
        potential: potential.clone().prepared()?,
        energy,
        mu,
        sigma,
        intervals: Vec::new(),
    };
    radial.intervals = radial.find_intervals(theta_max);
    if radial.intervals.is_empty() {
        return Err(Error::NoAllowedRegion);
    }
    Ok(radial)
}

impl RadialMomentum {
    pub fn p_theta_squared(&self, theta: f64) -> f64 {
        let r2 = self.spec.radius().powi(2);
        let g = inverse_metric(&self.spec, &self.rotor, theta);
        let (mu, sigma) = (self.mu, self.sigma);
        let v = self.potential.value_on(self.spec.theta_domain(), theta);
        2.0 * self.rotor.mass() * r2 * (self.energy - v)
            - r2 * (g.pp * mu * mu + 2.0 * g.ps * mu * sigma + g.ss * sigma * sigma)
    }

    /// `|p_θ|` where motion is allowed.
    pub fn p_theta(&self, theta: f64) -> Option<f64> {
        let p2 = self.p_theta_squared(theta);
        (p2 >= 0.0).then(|| p2.sqrt())
    }

    pub fn intervals(&self) -> &[AllowedInterval] {
        &self.intervals
    }

    pub fn turning_points(&self) -> Vec<f64> {
        let mut points = Vec::new();
        for i in &self.intervals {
            if i.lo_turning {
                points.push(i.lo);
            }
            if i.hi_turning {
                points.push(i.hi);
            }
        }
        points
    }

    /// The allowed interval containing `theta` (read modulo 2π on the torus).
    pub fn interval_containing(&self, theta: f64) -> Option<AllowedInterval> {
        self.intervals.iter().copied().find(|i| {
            if self.spec.kind() == ManifoldKind::Torus {
                let shifted = i.lo + (theta - i.lo).rem_euclid(TAU);
                shifted <= i.hi
            } else {
                (i.lo..=i.hi).contains(&theta)
            }
        })
    }

    /// `θ`-period `2MR² ∫ dθ / p_θ` of a bound interval.
    pub fn period(&self, interval: &AllowedInterval) -> Result<f64> {
        if !interval.is_bound() {
            return Err(Error::InvalidParameter("period requires an interval between two turning points".into()));
        }
        let mr2 = self.rotor.mass() * self.spec.radius().powi(2);
        let integral = self.turning_integral(interval, |p| 1.0 / p)?;
        Ok(2.0 * mr2 * integral)
    }

    /// Reduced action `∫ p_θ dθ` across a bound interval (one way).
    pub fn action(&self, interval: &AllowedInterval) -> Result<f64> {
        if !interval.is_bound() {
            return Err(Error::InvalidParameter("action requires an interval between two turning points".into()));
        }
        self.turning_integral(interval, |p| p)
    }

    /// `S_θ(b) - S_θ(a) = ∫_a^b |p_θ| dθ` inside one allowed interval.
    pub fn reduced_action(&self, a: f64, b: f64) -> Result<f64> {
        let inside = |t: f64| self.p_theta_squared(t) >= -1e-12 * self.scale();
        if !(inside(a) && inside(b)) {
            return Err(Error::InvalidParameter(format!("[{a}, {b}] is not classically allowed")));
        }
        let value = quadrature::integrate(|t| self.p_theta_squared(t).max(0.0).sqrt(), a, b, 1e-13, 1e-12)?;
        Ok(value.value)
    }

    fn scale(&self) -> f64 {
        2.0 * self.rotor.mass() * self.spec.radius().powi(2) * self.energy.abs().max(1.0)
    }

    /// `∫ g(p_θ) dθ` over a bound interval with `θ = mid + half sin u`,
    /// which removes the inverse-square-root endpoint behaviour.
    fn turning_integral(&self, interval: &AllowedInterval, g: impl Fn(f64) -> f64) -> Result<f64> {
        let mid = 0.5 * (interval.lo + interval.hi);
        let half = 0.5 * (interval.hi - interval.lo);
        let integrand = |u: f64| {
            let p2 = self.p_theta_squared(mid + half * u.sin());
            if p2 <= 0.0 {
                return 0.0;
            }
            g(p2.sqrt()) * half * u.cos()
        };
        let value = quadrature::integrate(integrand, -FRAC_PI_2, FRAC_PI_2, 1e-14, 1e-12)?;
        Ok(value.value)
    }

    fn find_intervals(&self, theta_max: f64) -> Vec<AllowedInterval> {
        let kind = self.spec.kind();
        let (lo, hi) = match kind {
            ManifoldKind::Sphere => (0.0, PI),
            ManifoldKind::Pseudosphere => (0.0, theta_max),
            ManifoldKind::Torus => (0.0, TAU),
        };
        let n = SCAN_SAMPLES;
        let sample = |i: usize| lo + (hi - lo) * (i as f64 + 0.5) / n as f64;
        let values: Vec<f64> = (0..n).map(|i| self.p_theta_squared(sample(i))).collect();

        if kind == ManifoldKind::Torus {
            return self.periodic_intervals(&values);
        }

        let mut intervals = Vec::new();
        let mut start: Option<(f64, bool)> = None;
        if values[0] >= 0.0 {
            start = Some((lo, false));
        }
        for i in 1..n {
            let (a, b) = (values[i - 1], values[i]);
            if (a >= 0.0) != (b >= 0.0) {
                let root = self.bisect(sample(i - 1), sample(i));
                if b >= 0.0 {
                    start = Some((root, true));
                } else if let Some((s, turning)) = start.take() {
                    intervals.push(AllowedInterval { lo: s, hi: root, lo_turning: turning, hi_turning: true });
                }
            }
        }
        if let Some((s, turning)) = start {
            intervals.push(AllowedInterval { lo: s, hi, lo_turning: turning, hi_turning: false });
        }
        intervals
    }

    /// Scans the circle starting from its most forbidden sample so that no
    /// allowed arc is split by the scan origin.
    fn periodic_intervals(&self, values: &[f64]) -> Vec<AllowedInterval> {
        let n = values.len();
        let step = TAU / n as f64;
        let (origin, &lowest) = values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("scan is non-empty");
        if lowest >= 0.0 {
            return vec![AllowedInterval { lo: 0.0, hi: TAU, lo_turning: false, hi_turning: false }];
        }
        let angle = |k: usize| (origin + k) as f64 * step + 0.5 * step;
        let value = |k: usize| values[(origin + k) % n];
        let mut intervals = Vec::new();
        let mut start = None;
        for k in 1..=n {
            let (a, b) = (value(k - 1), value(k));
            if (a >= 0.0) != (b >= 0.0) {
                let root = self.bisect(angle(k - 1), angle(k));
                if b >= 0.0 {
                    start = Some(root);
                } else if let Some(s) = start.take() {
                    intervals.push(AllowedInterval { lo: s, hi: root, lo_turning: true, hi_turning: true });
                }
            }
        }
        // report arcs in (-π, π] by their left end
        for i in &mut intervals {
            let shift = TAU * ((i.lo + PI) / TAU).floor();
            i.lo -= shift;
            i.hi -= shift;
        }
        intervals.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        intervals
    }

    fn bisect(&self, mut a: f64, mut b: f64) -> f64 {
        let fa_allowed = self.p_theta_squared(a) >= 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if (self.p_theta_squared(mid) >= 0.0) == fa_allowed {
                a = mid;
            } else {
                b = mid;
            }
        }
        0.5 * (a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Signature;

    fn sphere() -> (ManifoldSpec, RotorParams) {
        (ManifoldSpec::sphere(1.0).unwrap(), RotorParams::standard(1.0, 0.5).unwrap())
    }

    #[test]
    fn momenta_examples() {
        let (spec, rotor) = sphere();
        let zero = momenta_from_rates(&spec, &rotor, 1.0, &Vector3::zeros()).unwrap();
        assert_eq!(zero, Vector3::zeros());

        let torus = ManifoldSpec::torus(3.0, 1.0).unwrap();
        let rotor = RotorParams::standard(1.0, 2.0).unwrap();
        let w = 0.7;
        let p = momenta_from_rates(&torus, &rotor, FRAC_PI_2, &Vector3::new(0.0, w, 0.0)).unwrap();
        assert!((p - Vector3::new(0.0, 11.0 * w, 2.0 * w)).norm() < 1e-12);
    }

    #[test]
    fn hamiltonian_examples() {
        let (spec, rotor) = sphere();
        let zero = State::new(Vector3::new(1.0, 0.0, 0.0), Vector3::zeros());
        assert_eq!(hamiltonian(&spec, &rotor, &PotentialSpec::Zero, &zero).unwrap(), 0.0);
        let s = State::new(Vector3::new(FRAC_PI_2, 0.0, 0.0), Vector3::new(0.0, 1.3, 0.0));
        let h = hamiltonian(&spec, &rotor, &PotentialSpec::Zero, &s).unwrap();
        assert!((h - 0.5 * 1.3 * 1.3).abs() < 1e-14);
    }

    #[test]
    fn inverse_metric_derivatives_match_differences() {
        let rotor = RotorParams::new(1.0, 0.4, 1.0, Signature::Negative).unwrap();
        let specs = [
            (ManifoldSpec::sphere(1.3).unwrap(), RotorParams::standard(1.0, 0.4).unwrap()),
            (ManifoldSpec::pseudosphere(0.8).unwrap(), rotor),
            (ManifoldSpec::torus(3.0, 1.0).unwrap(), RotorParams::standard(1.0, 0.4).unwrap()),
        ];
        for (spec, rotor) in &specs {
            for &t in &[0.4, 1.1, 2.3] {
                let d = 1e-5;
                let (a, b, g) = (inverse_metric(spec, rotor, t + d), inverse_metric(spec, rotor, t - d), inverse_metric(spec, rotor, t));
                let fd = |x: f64, y: f64| (x - y) / (2.0 * d);
                assert!((fd(a.pp, b.pp) - g.d_pp).abs() < 1e-7 * (1.0 + g.d_pp.abs()));
                assert!((fd(a.ps, b.ps) - g.d_ps).abs() < 1e-7 * (1.0 + g.d_ps.abs()));
                assert!((fd(a.ss, b.ss) - g.d_ss).abs() < 1e-7 * (1.0 + g.d_ss.abs()));
            }
        }
    }

    #[test]
    fn equatorial_geodesic_stays_on_equator() {
        let (spec, rotor) = sphere();
        let s0 = State::new(Vector3::new(FRAC_PI_2, 0.0, 0.0), Vector3::new(0.0, 1.0, 0.0));
        let rec = integrate(&spec, &rotor, &PotentialSpec::Zero, &s0, 0.01, 500).unwrap();
        assert!(rec.states.iter().all(|s| (s.theta() - FRAC_PI_2).abs() < 1e-13));
    }

    #[test]
    fn meridian_motion_is_uniform_until_the_pole() {
        let (spec, rotor) = sphere();
        let (t0, pt) = (1.0, 0.3);
        let s0 = State::new(Vector3::new(t0, 0.0, 0.0), Vector3::new(pt, 0.0, 0.0));
        let rec = integrate(&spec, &rotor, &PotentialSpec::Zero, &s0, 0.05, 100).unwrap();
        for (t, s) in rec.times.iter().zip(&rec.states) {
            assert!((s.theta() - (t0 + pt * t)).abs() < 1e-12);
        }
        match integrate(&spec, &rotor, &PotentialSpec::Zero, &s0, 0.05, 1000) {
            Err(Error::PoleApproach { partial, theta, .. }) => {
                assert!(!partial.is_empty());
                assert!(theta > 3.0);
            }
            other => panic!("expected pole approach, got {other:?}"),
        }
    }

    #[test]
    fn hj_free_meridian() {
        let (spec, rotor) = sphere();
        let e = 0.8;
        let radial = hj_radial_momentum(&spec, &rotor, &PotentialSpec::Zero, e, 0.0, 0.0).unwrap();
        assert!(radial.turning_points().is_empty());
        let expected = (2.0 * e).sqrt();
        for t in [0.1, 1.0, 3.0] {
            assert!((radial.p_theta(t).unwrap() - expected).abs() < 1e-13);
        }
    }

    #[test]
    fn hj_sphere_centrifugal_turning_points() {
        let (spec, rotor) = sphere();
        let (e, mu) = (2.0, 1.2);
        let radial = hj_radial_momentum(&spec, &rotor, &PotentialSpec::Zero, e, mu, 0.0).unwrap();
        let tp = radial.turning_points();
        assert_eq!(tp.len(), 2);
        let theta = (mu / (2.0 * e).sqrt()).asin();
        assert!((tp[0] - theta).abs() < 1e-10);
        assert!((tp[1] - (PI - theta)).abs() < 1e-10);
        // the great-circle period is 2π R/v with v = √(2E/M)
        let period = radial.period(&radial.intervals()[0]).unwrap();
        assert!((period - TAU / (2.0 * e).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn hj_forbidden_everywhere() {
        let (spec, rotor) = sphere();
        let r = hj_radial_momentum(&spec, &rotor, &PotentialSpec::Zero, 0.1, 3.0, 0.0);
        assert!(matches!(r, Err(Error::NoAllowedRegion)));
    }
}
