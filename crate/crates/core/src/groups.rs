//! Group pictures of the sphere and pseudosphere problems.
//!
//! On the sphere the configuration `(φ, θ, ψ)` is a rotation
//! `U = Rz(φ) Rx(θ) Rz(ψ) ∈ SO(3)`; on the pseudosphere it is a Lorentz
//! transformation `L = Rz(φ) B(χ) Rz(ψ) ∈ SO(1,2)` with `χ = θ` and `B` a boost
//! in the `(y, z)` plane. The co-moving velocity is `U⁻¹ dU/dt`.

use nalgebra::Matrix3;

/// Minkowski metric `diag(1, 1, -1)` preserved by SO(1,2).
pub fn minkowski() -> Matrix3<f64> {
    Matrix3::from_diagonal(&nalgebra::Vector3::new(1.0, 1.0, -1.0))
}

/// Precession `phi`, nutation `theta` (the rapidity `χ` for SO(1,2)), proper rotation `psi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerAngles {
    pub phi: f64,
    pub theta: f64,
    pub psi: f64,
}

impl EulerAngles {
    pub fn new(phi: f64, theta: f64, psi: f64) -> Self {
        Self { phi, theta, psi }
    }
}

/// Time derivatives of the Euler angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BodyRates {
    pub dphi: f64,
    pub dtheta: f64,
    pub dpsi: f64,
}

impl BodyRates {
    pub fn new(dphi: f64, dtheta: f64, dpsi: f64) -> Self {
        Self { dphi, dtheta, dpsi }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    /// Angular velocity ω in so(3).
    Rotational,
    /// Pseudo-angular velocity λ in so(1,2).
    Lorentzian,
}

/// Body-frame velocity components `(w1, w2, w3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoMovingVelocity {
    pub w1: f64,
    pub w2: f64,
    pub w3: f64,
    pub flavor: Flavor,
}

impl CoMovingVelocity {
    /// The Lie-algebra matrix with these components.
    ///
    /// Rotational: `[[0, -w3, w2], [w3, 0, -w1], [-w2, w1, 0]]`.
    /// Lorentzian: `[[0, -w3, w2], [w3, 0, w1], [w2, w1, 0]]`.
    pub fn matrix(&self) -> Matrix3<f64> {
        let (a, b, c) = (self.w1, self.w2, self.w3);
        match self.flavor {
            Flavor::Rotational => Matrix3::new(0.0, -c, b, c, 0.0, -a, -b, a, 0.0),
            Flavor::Lorentzian => Matrix3::new(0.0, -c, b, c, 0.0, a, b, a, 0.0),
        }
    }

    /// Reads the components back from an algebra element, averaging the
    /// two entries that carry each component.
    pub fn from_matrix(m: &Matrix3<f64>, flavor: Flavor) -> Self {
        match flavor {
            Flavor::Rotational => Self {
                w1: 0.5 * (m[(2, 1)] - m[(1, 2)]),
                w2: 0.5 * (m[(0, 2)] - m[(2, 0)]),
                w3: 0.5 * (m[(1, 0)] - m[(0, 1)]),
                flavor,
            },
            Flavor::Lorentzian => Self {
                w1: 0.5 * (m[(1, 2)] + m[(2, 1)]),
                w2: 0.5 * (m[(0, 2)] + m[(2, 0)]),
                w3: 0.5 * (m[(1, 0)] - m[(0, 1)]),
                flavor,
            },
        }
    }

    /// Largest entry of `A + Aᵀ` (so(3)) or `Aᵀ η + η A` (so(1,2)).
    pub fn algebra_defect(m: &Matrix3<f64>, flavor: Flavor) -> f64 {
        match flavor {
            Flavor::Rotational => (m + m.transpose()).abs().max(),
            Flavor::Lorentzian => {
                let eta = minkowski();
                (m.transpose() * eta + eta * m).abs().max()
            }
        }
    }
}

pub fn rotation_z(angle: f64) -> Matrix3<f64> {
    let (s, c) = angle.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

pub fn rotation_x(angle: f64) -> Matrix3<f64> {
    let (s, c) = angle.sin_cos();
    Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c)
}

/// Boost mixing `y` and `z` with rapidity `chi`.
pub fn boost(chi: f64) -> Matrix3<f64> {
    let (s, c) = (chi.sinh(), chi.cosh());
    Matrix3::new(1.0, 0.0, 0.0, 0.0, c, s, 0.0, s, c)
}

fn d_rotation_z(angle: f64) -> Matrix3<f64> {
    let (s, c) = angle.sin_cos();
    Matrix3::new(-s, -c, 0.0, c, -s, 0.0, 0.0, 0.0, 0.0)
}

fn d_rotation_x(angle: f64) -> Matrix3<f64> {
    let (s, c) = angle.sin_cos();
    Matrix3::new(0.0, 0.0, 0.0, 0.0, -s, -c, 0.0, c, -s)
}

fn d_boost(chi: f64) -> Matrix3<f64> {
    let (s, c) = (chi.sinh(), chi.cosh());
    Matrix3::new(0.0, 0.0, 0.0, 0.0, s, c, 0.0, c, s)
}

/// `U(φ, θ, ψ) = Rz(φ) Rx(θ) Rz(ψ)`.
pub fn euler_matrix(angles: &EulerAngles) -> Matrix3<f64> {
    rotation_z(angles.phi) * rotation_x(angles.theta) * rotation_z(angles.psi)
}

/// `L(φ, χ, ψ) = Rz(φ) B(χ) Rz(ψ)`.
pub fn lorentz_matrix(angles: &EulerAngles) -> Matrix3<f64> {
    rotation_z(angles.phi) * boost(angles.theta) * rotation_z(angles.psi)
}

/// `dU/dt` by the product rule.
pub fn euler_matrix_rate(angles: &EulerAngles, rates: &BodyRates) -> Matrix3<f64> {
    let (a, b, c) = (rotation_z(angles.phi), rotation_x(angles.theta), rotation_z(angles.psi));
    d_rotation_z(angles.phi) * b * c * rates.dphi
        + a * d_rotation_x(angles.theta) * c * rates.dtheta
        + a * b * d_rotation_z(angles.psi) * rates.dpsi
}

/// `dL/dt` by the product rule.
pub fn lorentz_matrix_rate(angles: &EulerAngles, rates: &BodyRates) -> Matrix3<f64> {
    let (a, b, c) = (rotation_z(angles.phi), boost(angles.theta), rotation_z(angles.psi));
    d_rotation_z(angles.phi) * b * c * rates.dphi
        + a * d_boost(angles.theta) * c * rates.dtheta
        + a * b * d_rotation_z(angles.psi) * rates.dpsi
}

/// Group inverse: `Uᵀ` for SO(3), `η Lᵀ η` for SO(1,2).
pub fn group_inverse(m: &Matrix3<f64>, flavor: Flavor) -> Matrix3<f64> {
    match flavor {
        Flavor::Rotational => m.transpose(),
        Flavor::Lorentzian => {
            let eta = minkowski();
            eta * m.transpose() * eta
        }
    }
}

/// `g⁻¹ dg/dt` for a group element `g` and its velocity, read as components.
pub fn velocity_from_path(g: &Matrix3<f64>, dg: &Matrix3<f64>, flavor: Flavor) -> CoMovingVelocity {
    CoMovingVelocity::from_matrix(&(group_inverse(g, flavor) * dg), flavor)
}

/// Closed-form co-moving velocity in Euler-angle rates.
pub fn co_moving_velocity(angles: &EulerAngles, rates: &BodyRates, flavor: Flavor) -> CoMovingVelocity {
    let (sp, cp) = angles.psi.sin_cos();
    let w3_coupling;
    let (w1, w2);
    match flavor {
        Flavor::Rotational => {
            let (st, ct) = angles.theta.sin_cos();
            w1 = cp * rates.dtheta + st * sp * rates.dphi;
            w2 = -sp * rates.dtheta + st * cp * rates.dphi;
            w3_coupling = ct;
        }
        Flavor::Lorentzian => {
            let (sh, ch) = (angles.theta.sinh(), angles.theta.cosh());
            w1 = cp * rates.dtheta + sh * sp * rates.dphi;
            w2 = sp * rates.dtheta - sh * cp * rates.dphi;
            w3_coupling = ch;
        }
    }
    CoMovingVelocity {
        w1,
        w2,
        w3: rates.dpsi + w3_coupling * rates.dphi,
        flavor,
    }
}

/// `½ (I1 w1² + I2 w2² + I3 w3²)`.
pub fn kinetic_energy_group(v: &CoMovingVelocity, i1: f64, i2: f64, i3: f64) -> f64 {
    0.5 * (i1 * v.w1 * v.w1 + i2 * v.w2 * v.w2 + i3 * v.w3 * v.w3)
}

/// Principal moments `(MR², MR², I)` of the equivalent symmetric top.
pub fn top_inertia(mass: f64, radius: f64, inertia: f64) -> [f64; 3] {
    let mr2 = mass * radius * radius;
    [mr2, mr2, inertia]
}
