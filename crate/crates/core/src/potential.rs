//! Latitude-only potentials `V(θ)`.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ThetaDomain;

/// A potential depending on the latitude only, so that `φ` and `ψ` stay cyclic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialSpec {
    Zero,
    /// `V0 (1 - cos θ)`: a well of depth `2 V0` centred on the north pole.
    CosineWell { v0: f64 },
    /// `V0 θ²`.
    Harmonic { v0: f64 },
    /// Natural cubic spline through `(theta, values)`.
    Tabulated {
        theta: Vec<f64>,
        values: Vec<f64>,
        #[serde(skip)]
        spline: Option<Spline>,
    },
}

impl PotentialSpec {
    pub fn tabulated(theta: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let spline = Spline::new(&theta, &values)?;
        Ok(PotentialSpec::Tabulated {
            theta,
            values,
            spline: Some(spline),
        })
    }

    /// Rebuilds the spline of a deserialized table and checks parameters.
    pub fn prepared(self) -> Result<Self> {
        match self {
            PotentialSpec::Tabulated { theta, values, .. } => Self::tabulated(theta, values),
            PotentialSpec::CosineWell { v0 } | PotentialSpec::Harmonic { v0 } if !v0.is_finite() => {
                Err(Error::InvalidParameter(format!("potential strength must be finite, got {v0}")))
            }
            other => Ok(other),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, PotentialSpec::Zero)
    }

    pub fn value(&self, theta: f64) -> f64 {
        match self {
            PotentialSpec::Zero => 0.0,
            PotentialSpec::CosineWell { v0 } => v0 * (1.0 - theta.cos()),
            PotentialSpec::Harmonic { v0 } => v0 * theta * theta,
            PotentialSpec::Tabulated { spline, .. } => spline
                .as_ref()
                .expect("tabulated potential used before prepared()")
                .eval(theta)
                .0,
        }
    }

    pub fn derivative(&self, theta: f64) -> f64 {
        match self {
            PotentialSpec::Zero => 0.0,
            PotentialSpec::CosineWell { v0 } => v0 * theta.sin(),
            PotentialSpec::Harmonic { v0 } => 2.0 * v0 * theta,
            PotentialSpec::Tabulated { spline, .. } => spline
                .as_ref()
                .expect("tabulated potential used before prepared()")
                .eval(theta)
                .1,
        }
    }

    /// Value on a surface: on the periodic torus tables are read modulo 2π
    /// and the harmonic well uses the signed distance from `θ = 0`.
    pub fn value_on(&self, domain: ThetaDomain, theta: f64) -> f64 {
        self.value(self.chart(domain, theta))
    }

    pub fn derivative_on(&self, domain: ThetaDomain, theta: f64) -> f64 {
        self.derivative(self.chart(domain, theta))
    }

    fn chart(&self, domain: ThetaDomain, theta: f64) -> f64 {
        if domain != ThetaDomain::Periodic {
            return theta;
        }
        match self {
            PotentialSpec::Harmonic { .. } => {
                let w = theta.rem_euclid(TAU);
                if w >= PI {
                    w - TAU
                } else {
                    w
                }
            }
            PotentialSpec::Tabulated { .. } => theta.rem_euclid(TAU),
            _ => theta,
        }
    }

    /// For tables: the covered interval, which must contain `[lo, hi]`.
    pub fn check_covers(&self, lo: f64, hi: f64) -> Result<()> {
        if let PotentialSpec::Tabulated { theta, .. } = self {
            let (first, last) = (theta[0], theta[theta.len() - 1]);
            if first > lo + 1e-12 || last < hi - 1e-12 {
                return Err(Error::InvalidParameter(format!(
                    "tabulated potential covers [{first}, {last}] but [{lo}, {hi}] is required"
                )));
            }
        }
        Ok(())
    }
}

/// Natural cubic spline; constant extrapolation outside the knots.
#[derive(Debug, Clone, PartialEq)]
pub struct Spline {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl Spline {
    pub fn new(x: &[f64], y: &[f64]) -> Result<Self> {
        if x.len() != y.len() || x.len() < 2 {
            return Err(Error::InvalidParameter(
                "tabulated potential needs at least two points and equal lengths".into(),
            ));
        }
        if x.iter().chain(y).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("tabulated potential has non-finite entries".into()));
        }
        if x.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("tabulated grid must be strictly increasing".into()));
        }
        let n = x.len();
        // second derivatives from the tridiagonal system, natural ends
        let mut m = vec![0.0; n];
        if n > 2 {
            let mut c_prime = vec![0.0; n];
            let mut d_prime = vec![0.0; n];
            for i in 1..n - 1 {
                let h0 = x[i] - x[i - 1];
                let h1 = x[i + 1] - x[i];
                let a = h0 / 6.0;
                let b = (h0 + h1) / 3.0;
                let c = h1 / 6.0;
                let d = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
                let denom = b - a * c_prime[i - 1];
                c_prime[i] = c / denom;
                d_prime[i] = (d - a * d_prime[i - 1]) / denom;
            }
            for i in (1..n - 1).rev() {
                m[i] = d_prime[i] - c_prime[i] * m[i + 1];
            }
        }
        Ok(Self {
            x: x.to_vec(),
            y: y.to_vec(),
            m,
        })
    }

    /// Value and first derivative.
    pub fn eval(&self, t: f64) -> (f64, f64) {
        let n = self.x.len();
        if t <= self.x[0] {
            return (self.y[0], 0.0);
        }
        if t >= self.x[n - 1] {
            return (self.y[n - 1], 0.0);
        }
        let i = self.x.partition_point(|&v| v <= t).saturating_sub(1).min(n - 2);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        let value = a * self.y[i] + b * self.y[i + 1] + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
        let slope = (self.y[i + 1] - self.y[i]) / h
            + (-(3.0 * a * a - 1.0) * m0 + (3.0 * b * b - 1.0) * m1) * h / 6.0;
        (value, slope)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_potentials() {
        let v = PotentialSpec::CosineWell { v0: 2.0 };
        assert_eq!(v.value(0.0), 0.0);
        assert!((v.value(std::f64::consts::PI) - 4.0).abs() < 1e-15);
        let d = 1e-5;
        for p in [v, PotentialSpec::Harmonic { v0: 0.7 }] {
            for t in [0.2, 1.0, 2.5] {
                let fd = (p.value(t + d) - p.value(t - d)) / (2.0 * d);
                assert!((fd - p.derivative(t)).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn spline_reproduces_smooth_function() {
        let x: Vec<f64> = (0..=200).map(|i| i as f64 * 0.02).collect();
        let y: Vec<f64> = x.iter().map(|t| t.sin()).collect();
        let p = PotentialSpec::tabulated(x, y).unwrap();
        for t in [0.5, 1.33, 2.9] {
            assert!((p.value(t) - t.sin()).abs() < 1e-6);
            assert!((p.derivative(t) - t.cos()).abs() < 1e-4);
        }
        assert!(p.check_covers(0.0, 4.0).is_ok());
        assert!(p.check_covers(0.0, 5.0).is_err());
        let wrapped = p.value_on(ThetaDomain::Periodic, 1.0 + TAU);
        assert!((wrapped - p.value(1.0)).abs() < 1e-12);
    }

    #[test]
    fn periodic_harmonic_is_even_about_zero() {
        let p = PotentialSpec::Harmonic { v0: 1.5 };
        let d = ThetaDomain::Periodic;
        assert!((p.value_on(d, TAU - 0.3) - p.value_on(d, 0.3)).abs() < 1e-12);
        assert!((p.derivative_on(d, TAU - 0.3) + p.derivative_on(d, 0.3)).abs() < 1e-12);
        assert_eq!(p.value_on(ThetaDomain::HalfLine, 4.0), 24.0);
    }

    #[test]
    fn tabulated_validation() {
        assert!(PotentialSpec::tabulated(vec![0.0, 1.0, 1.0], vec![0.0; 3]).is_err());
        assert!(PotentialSpec::tabulated(vec![0.0], vec![0.0]).is_err());
        assert!(PotentialSpec::tabulated(vec![0.0, 1.0], vec![0.0, f64::NAN]).is_err());
        let json = r#"{"kind":"tabulated","theta":[0.0,1.0,2.0],"values":[0.0,1.0,4.0]}"#;
        let p: PotentialSpec = serde_json::from_str(json).unwrap();
        let p = p.prepared().unwrap();
        assert!((p.value(1.0) - 1.0).abs() < 1e-15);
    }
}
