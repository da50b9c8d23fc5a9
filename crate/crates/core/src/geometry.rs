//! Base surfaces and the configuration-space metric of the rotor.
//!
//! All three surfaces share one description: in the latitude coordinate
//! `theta` the base metric is `R² dθ² + h(θ)² dφ²`, and the frame attached to
//! the surface turns with the longitude at the rate `c(θ) φ̇`, so that the
//! co-moving angular velocity of the rotor is `Ω = ψ̇ + c(θ) φ̇`. The pair
//! `(h, c)` is the [`Profile`].
//!
//! The kinetic energy is written `T = (M/2) G_ij q̇^i q̇^j` with coordinates
//! ordered `(θ, φ, ψ)`, so `G` carries the ratio `I/M` in its rotational block.

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Minimum distance from a singular endpoint for `theta` to count as interior.
pub const ENDPOINT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ManifoldKind {
    Sphere,
    Pseudosphere,
    Torus,
}

impl ManifoldKind {
    pub fn name(self) -> &'static str {
        match self {
            ManifoldKind::Sphere => "sphere",
            ManifoldKind::Pseudosphere => "pseudosphere",
            ManifoldKind::Torus => "torus",
        }
    }
}

/// The latitude interval of a surface together with its topology.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThetaDomain {
    /// Open `(0, π)`, both endpoints are coordinate poles.
    Polar,
    /// Open `(0, ∞)`, the left endpoint is a pole.
    HalfLine,
    /// `[0, 2π)` with the endpoints identified.
    Periodic,
}

impl ThetaDomain {
    pub fn describe(self) -> &'static str {
        match self {
            ThetaDomain::Polar => "(0, pi)",
            ThetaDomain::HalfLine => "(0, inf)",
            ThetaDomain::Periodic => "[0, 2pi) periodic",
        }
    }

    /// Lower and upper bounds; the upper bound is infinite for the half line.
    pub fn bounds(self) -> (f64, f64) {
        match self {
            ThetaDomain::Polar => (0.0, PI),
            ThetaDomain::HalfLine => (0.0, f64::INFINITY),
            ThetaDomain::Periodic => (0.0, TAU),
        }
    }

    /// True when `theta` is farther than [`ENDPOINT_TOLERANCE`] from every
    /// singular endpoint. Every finite value is interior to a periodic domain.
    pub fn is_interior(self, theta: f64) -> bool {
        if !theta.is_finite() {
            return false;
        }
        match self {
            ThetaDomain::Polar => theta > ENDPOINT_TOLERANCE && theta < PI - ENDPOINT_TOLERANCE,
            ThetaDomain::HalfLine => theta > ENDPOINT_TOLERANCE,
            ThetaDomain::Periodic => true,
        }
    }

    /// Closed-domain membership, poles included.
    pub fn contains_closed(self, theta: f64) -> bool {
        if !theta.is_finite() {
            return false;
        }
        match self {
            ThetaDomain::Polar => (0.0..=PI).contains(&theta),
            ThetaDomain::HalfLine => theta >= 0.0,
            ThetaDomain::Periodic => true,
        }
    }
}

/// One of the three surfaces with its shape parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManifoldSpec {
    kind: ManifoldKind,
    radius: f64,
    central_radius: Option<f64>,
}

impl ManifoldSpec {
    pub fn sphere(radius: f64) -> Result<Self> {
        check_positive("R", radius)?;
        Ok(Self {
            kind: ManifoldKind::Sphere,
            radius,
            central_radius: None,
        })
    }

    pub fn pseudosphere(radius: f64) -> Result<Self> {
        check_positive("R", radius)?;
        Ok(Self {
            kind: ManifoldKind::Pseudosphere,
            radius,
            central_radius: None,
        })
    }

    /// Torus with central radius `central` (L) and tube radius `tube` (R).
    /// Requires `L > R` so that the surface does not self-intersect.
    pub fn torus(central: f64, tube: f64) -> Result<Self> {
        check_positive("R", tube)?;
        check_positive("L", central)?;
        if central <= tube {
            return Err(Error::InvalidParameter(format!(
                "torus requires L > R, got L = {central}, R = {tube}"
            )));
        }
        Ok(Self {
            kind: ManifoldKind::Torus,
            radius: tube,
            central_radius: Some(central),
        })
    }

    pub fn new(kind: ManifoldKind, radius: f64, central_radius: Option<f64>) -> Result<Self> {
        match kind {
            ManifoldKind::Sphere => Self::sphere(radius),
            ManifoldKind::Pseudosphere => Self::pseudosphere(radius),
            ManifoldKind::Torus => {
                let l = central_radius.ok_or_else(|| {
                    Error::InvalidParameter("torus requires the central radius L".into())
                })?;
                Self::torus(l, radius)
            }
        }
    }

    pub fn kind(&self) -> ManifoldKind {
        self.kind
    }

    /// Sphere radius, pseudoradius, or torus tube radius.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Torus central radius `L`; `None` for the other surfaces.
    pub fn central_radius(&self) -> Option<f64> {
        self.central_radius
    }

    pub fn theta_domain(&self) -> ThetaDomain {
        match self.kind {
            ManifoldKind::Sphere => ThetaDomain::Polar,
            ManifoldKind::Pseudosphere => ThetaDomain::HalfLine,
            ManifoldKind::Torus => ThetaDomain::Periodic,
        }
    }

    /// Geodesic distance from the north pole, `r = R θ`.
    pub fn arc_length(&self, theta: f64) -> f64 {
        self.radius * theta
    }

    fn l(&self) -> f64 {
        self.central_radius.unwrap_or(0.0)
    }

    fn check_interior(&self, theta: f64) -> Result<()> {
        let domain = self.theta_domain();
        if domain.is_interior(theta) {
            Ok(())
        } else {
            Err(Error::Domain {
                theta,
                domain: domain.describe(),
            })
        }
    }

    fn check_closed(&self, theta: f64) -> Result<()> {
        let domain = self.theta_domain();
        if domain.contains_closed(theta) {
            Ok(())
        } else {
            Err(Error::Domain {
                theta,
                domain: domain.describe(),
            })
        }
    }

    /// `(h, h', h'')` without domain checks.
    pub(crate) fn h_derivatives(&self, theta: f64) -> (f64, f64, f64) {
        let r = self.radius;
        match self.kind {
            ManifoldKind::Sphere => {
                let (s, c) = theta.sin_cos();
                (r * s, r * c, -r * s)
            }
            ManifoldKind::Pseudosphere => {
                let (s, c) = (theta.sinh(), theta.cosh());
                (r * s, r * c, r * s)
            }
            ManifoldKind::Torus => {
                let (s, c) = theta.sin_cos();
                (self.l() + r * c, -r * s, -r * c)
            }
        }
    }

    /// `(c, c')` without domain checks.
    pub(crate) fn c_derivatives(&self, theta: f64) -> (f64, f64) {
        match self.kind {
            ManifoldKind::Sphere => (theta.cos(), -theta.sin()),
            ManifoldKind::Pseudosphere => (theta.cosh(), theta.sinh()),
            // Orientation of the moving frame follows the printed torus kinetic energy.
            ManifoldKind::Torus => (theta.sin(), theta.cos()),
        }
    }

    pub(crate) fn profile_unchecked(&self, theta: f64) -> Profile {
        let (h, dh, _) = self.h_derivatives(theta);
        let (c, dc) = self.c_derivatives(theta);
        Profile { h, dh, c, dc }
    }
}

fn check_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be positive and finite, got {value}"
        )))
    }
}

/// Sign of the rotational contribution to the kinetic energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Signature {
    Positive,
    Negative,
}

impl Signature {
    pub fn sign(self) -> f64 {
        match self {
            Signature::Positive => 1.0,
            Signature::Negative => -1.0,
        }
    }

    pub fn from_sign(sign: i32) -> Result<Self> {
        match sign {
            1 => Ok(Signature::Positive),
            -1 => Ok(Signature::Negative),
            other => Err(Error::InvalidParameter(format!(
                "signature must be +1 or -1, got {other}"
            ))),
        }
    }
}

/// Mass, moment of inertia, Planck constant and rotational signature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotorParams {
    mass: f64,
    inertia: f64,
    hbar: f64,
    signature: Signature,
}

impl RotorParams {
    pub fn new(mass: f64, inertia: f64, hbar: f64, signature: Signature) -> Result<Self> {
        check_positive("M", mass)?;
        check_positive("I", inertia)?;
        check_positive("hbar", hbar)?;
        Ok(Self {
            mass,
            inertia,
            hbar,
            signature,
        })
    }

    /// Positive signature, `ħ = 1`.
    pub fn standard(mass: f64, inertia: f64) -> Result<Self> {
        Self::new(mass, inertia, 1.0, Signature::Positive)
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn inertia(&self) -> f64 {
        self.inertia
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    /// `sig · I / M`, the rotational block scale of the metric.
    pub fn rotational_ratio(&self) -> f64 {
        self.signature.sign() * self.inertia / self.mass
    }

    /// The negative signature is only defined for the pseudosphere.
    pub fn check_compatible(&self, spec: &ManifoldSpec) -> Result<()> {
        if self.signature == Signature::Negative && spec.kind() != ManifoldKind::Pseudosphere {
            return Err(Error::InvalidParameter(format!(
                "negative rotational signature is only available on the pseudosphere, not the {}",
                spec.kind().name()
            )));
        }
        Ok(())
    }
}

/// Azimuthal metric coefficient `h` and frame coupling `c`, with derivatives in θ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Profile {
    pub h: f64,
    pub dh: f64,
    pub c: f64,
    pub dc: f64,
}

pub fn profile(spec: &ManifoldSpec, theta: f64) -> Result<Profile> {
    spec.check_interior(theta)?;
    Ok(spec.profile_unchecked(theta))
}

/// `G`, its inverse and `√|det G|` at one latitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricField {
    pub g: Matrix3<f64>,
    pub g_inv: Matrix3<f64>,
    pub sqrt_abs_det: f64,
}

pub fn metric_tensor(spec: &ManifoldSpec, rotor: &RotorParams, theta: f64) -> Result<MetricField> {
    rotor.check_compatible(spec)?;
    let p = profile(spec, theta)?;
    if p.h == 0.0 {
        return Err(Error::SingularMetric { theta, h: p.h });
    }
    let r = spec.radius();
    let k = rotor.rotational_ratio();
    let (h, c) = (p.h, p.c);
    let h2 = h * h;

    let g = Matrix3::new(
        r * r, 0.0, 0.0,
        0.0, h2 + k * c * c, k * c,
        0.0, k * c, k,
    );
    let g_inv = Matrix3::new(
        1.0 / (r * r), 0.0, 0.0,
        0.0, 1.0 / h2, -c / h2,
        0.0, -c / h2, 1.0 / k + c * c / h2,
    );
    let sqrt_abs_det = (rotor.inertia() / rotor.mass()).sqrt() * r * h.abs();
    Ok(MetricField {
        g,
        g_inv,
        sqrt_abs_det,
    })
}

/// Closed form `det G = sig · (I/M) · R² · h²`.
pub fn metric_determinant(spec: &ManifoldSpec, rotor: &RotorParams, theta: f64) -> Result<f64> {
    let p = profile(spec, theta)?;
    let r = spec.radius();
    Ok(rotor.rotational_ratio() * r * r * p.h * p.h)
}

/// Point of the embedded surface in ℝ³. Poles are accepted.
pub fn embed(spec: &ManifoldSpec, theta: f64, phi: f64) -> Result<Vector3<f64>> {
    spec.check_closed(theta)?;
    if !phi.is_finite() {
        return Err(Error::InvalidParameter(format!("phi must be finite, got {phi}")));
    }
    let r = spec.radius();
    let (sp, cp) = phi.sin_cos();
    Ok(match spec.kind() {
        ManifoldKind::Sphere => {
            let (s, c) = theta.sin_cos();
            Vector3::new(r * s * cp, r * s * sp, r * c)
        }
        ManifoldKind::Pseudosphere => {
            let (s, c) = (theta.sinh(), theta.cosh());
            Vector3::new(r * s * cp, r * s * sp, r * c)
        }
        ManifoldKind::Torus => {
            let (s, c) = theta.sin_cos();
            let rho = spec.l() + r * c;
            Vector3::new(rho * cp, rho * sp, r * s)
        }
    })
}

/// Defining polynomial of the surface, zero exactly on the surface.
///
/// For the pseudosphere a point of the lower sheet (`z ≤ 0` with vanishing
/// quadric) is rejected.
pub fn implicit_residual(spec: &ManifoldSpec, point: &Vector3<f64>) -> Result<f64> {
    let (x, y, z) = (point.x, point.y, point.z);
    let r2 = spec.radius() * spec.radius();
    match spec.kind() {
        ManifoldKind::Sphere => Ok(x * x + y * y + z * z - r2),
        ManifoldKind::Pseudosphere => {
            let value = -x * x - y * y + z * z - r2;
            if z <= 0.0 && value.abs() <= 1e-10 * r2.max(z * z) {
                return Err(Error::Hemisphere { z });
            }
            Ok(value)
        }
        ManifoldKind::Torus => {
            let l2 = spec.l() * spec.l();
            let rho2 = x * x + y * y;
            let a = rho2 + z * z + l2 - r2;
            Ok(a * a - 4.0 * l2 * rho2)
        }
    }
}

/// Which coordinate the radial frame component refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameCoordinate {
    /// Components in `(r, φ)`, `r = Rθ`.
    ArcLength,
    /// Components in `(θ, φ)`.
    Latitude,
}

/// Orthonormal frame `(E_radial, E_azimuthal)` in coordinate components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub coordinate: FrameCoordinate,
    pub radial: [f64; 2],
    pub azimuthal: [f64; 2],
    /// Diagonal base metric in the same coordinates.
    pub base_metric: [f64; 2],
}

impl Frame {
    /// `g(E_a, E_b)` for `a, b ∈ {radial, azimuthal}`.
    pub fn gram(&self) -> [[f64; 2]; 2] {
        let e = [self.radial, self.azimuthal];
        let mut out = [[0.0; 2]; 2];
        for (a, ea) in e.iter().enumerate() {
            for (b, eb) in e.iter().enumerate() {
                out[a][b] = self.base_metric[0] * ea[0] * eb[0] + self.base_metric[1] * ea[1] * eb[1];
            }
        }
        out
    }
}

pub fn frame_vectors(spec: &ManifoldSpec, theta: f64) -> Result<Frame> {
    let p = profile(spec, theta)?;
    if p.h == 0.0 {
        return Err(Error::SingularMetric { theta, h: p.h });
    }
    let h2 = p.h * p.h;
    Ok(match spec.kind() {
        ManifoldKind::Sphere | ManifoldKind::Pseudosphere => Frame {
            coordinate: FrameCoordinate::ArcLength,
            radial: [1.0, 0.0],
            azimuthal: [0.0, 1.0 / p.h],
            base_metric: [1.0, h2],
        },
        ManifoldKind::Torus => {
            let r = spec.radius();
            Frame {
                coordinate: FrameCoordinate::Latitude,
                radial: [1.0 / r, 0.0],
                azimuthal: [0.0, 1.0 / p.h],
                base_metric: [r * r, h2],
            }
        }
    })
}

/// Scalar curvature `2K` of the base surface, `K = -h_rr / h` with `r = Rθ`.
pub fn scalar_curvature(spec: &ManifoldSpec, theta: f64) -> Result<f64> {
    spec.check_interior(theta)?;
    let (h, _, d2h) = spec.h_derivatives(theta);
    let r = spec.radius();
    Ok(match spec.kind() {
        ManifoldKind::Sphere => 2.0 / (r * r),
        ManifoldKind::Pseudosphere => -2.0 / (r * r),
        ManifoldKind::Torus => -2.0 * d2h / (r * r * h),
    })
}
