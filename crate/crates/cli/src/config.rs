//! Run configuration: a JSON document, flag overrides, and the resolved form
//! that is written next to every result.

use std::fs;
use std::path::{Path, PathBuf};

use rotorlab::spectral::{Grid, NormConvention};
use rotorlab::{ManifoldKind, ManifoldSpec, PotentialSpec, RotorParams, Signature};
use serde::{Deserialize, Serialize};

use crate::Overrides;

/// A configuration problem, reported with exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<rotorlab::Error> for ConfigError {
    fn from(e: rotorlab::Error) -> Self {
        ConfigError(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub manifold: ManifoldConfig,
    pub rotor: RotorConfig,
    pub potential: PotentialSpec,
    pub grid: GridConfig,
    pub quantum: QuantumConfig,
    pub solver: SolverConfig,
    pub output: OutputConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub geodesic: Option<GeodesicConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hj: Option<HjConfig>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            manifold: ManifoldConfig::default(),
            rotor: RotorConfig::default(),
            potential: PotentialSpec::Zero,
            grid: GridConfig::default(),
            quantum: QuantumConfig::default(),
            solver: SolverConfig::default(),
            output: OutputConfig::default(),
            geodesic: None,
            hj: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ManifoldConfig {
    pub kind: ManifoldKind,
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    pub l: Option<f64>,
}

impl Default for ManifoldConfig {
    fn default() -> Self {
        Self {
            kind: ManifoldKind::Sphere,
            r: 1.0,
            l: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RotorConfig {
    #[serde(rename = "M")]
    pub mass: f64,
    #[serde(rename = "I")]
    pub inertia: f64,
    pub hbar: f64,
    pub sig: i32,
}

impl Default for RotorConfig {
    fn default() -> Self {
        Self {
            mass: 1.0,
            inertia: 1.0,
            hbar: 1.0,
            sig: 1,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_max: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuantumConfig {
    pub m: i64,
    pub s: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_range: Option<[i64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_range: Option<[i64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    pub k: usize,
    pub norm: NormConvention,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            k: 6,
            norm: NormConvention::UnitVolume,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub format: Format,
    /// Results go to standard output when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

/// Initial state `q = (θ, φ, ψ)`, `p = (p_θ, p_φ, p_ψ)` and step control.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeodesicConfig {
    pub q: [f64; 3],
    pub p: [f64; 3],
    pub dt: f64,
    pub steps: usize,
    /// Write every `every`-th sample.
    #[serde(default = "one")]
    pub every: usize,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HjConfig {
    #[serde(rename = "E")]
    pub energy: f64,
    pub mu: f64,
    pub sigma: f64,
}

/// Validated physical objects built from a configuration.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub spec: ManifoldSpec,
    pub rotor: RotorParams,
    pub potential: PotentialSpec,
    pub grid: Grid,
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, ConfigError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())))
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<(), ConfigError> {
        if let Some(kind) = o.manifold {
            self.manifold.kind = kind;
        }
        set(&mut self.manifold.r, o.r);
        if o.l.is_some() {
            self.manifold.l = o.l;
        }
        set(&mut self.rotor.mass, o.mass);
        set(&mut self.rotor.inertia, o.inertia);
        set(&mut self.rotor.hbar, o.hbar);
        set(&mut self.rotor.sig, o.sig);
        if let Some(text) = &o.potential {
            self.potential = serde_json::from_str(text)
                .map_err(|e| ConfigError(format!("--potential: {e}")))?;
        }
        if o.n.is_some() {
            self.grid.n = o.n;
        }
        if o.theta_max.is_some() {
            self.grid.theta_max = o.theta_max;
        }
        set(&mut self.quantum.m, o.m);
        set(&mut self.quantum.s, o.s);
        if let Some(r) = &o.m_range {
            self.quantum.m_range = Some(parse_range("--m-range", r)?);
        }
        if let Some(r) = &o.s_range {
            self.quantum.s_range = Some(parse_range("--s-range", r)?);
        }
        set(&mut self.solver.k, o.k);
        set(&mut self.solver.norm, o.norm);
        set(&mut self.output.format, o.format);
        if o.output.is_some() {
            self.output.path = o.output.clone();
        }
        if o.dt.is_some() || o.steps.is_some() {
            let g = self
                .geodesic
                .as_mut()
                .ok_or_else(|| ConfigError("--dt/--steps need a geodesic block in the config".into()))?;
            set(&mut g.dt, o.dt);
            set(&mut g.steps, o.steps);
        }
        match (&mut self.hj, o.energy, o.mu, o.sigma) {
            (_, None, None, None) => {}
            (Some(hj), e, mu, sigma) => {
                set(&mut hj.energy, e);
                set(&mut hj.mu, mu);
                set(&mut hj.sigma, sigma);
            }
            (None, Some(energy), mu, sigma) => {
                self.hj = Some(HjConfig {
                    energy,
                    mu: mu.unwrap_or(0.0),
                    sigma: sigma.unwrap_or(0.0),
                });
            }
            (None, None, _, _) => return Err(ConfigError("--mu/--sigma need --E or an hj block".into())),
        }
        Ok(())
    }

    /// Builds the physical objects and fills defaults back into the config so
    /// that it describes the run completely.
    pub fn resolve(&mut self) -> Result<Resolved, ConfigError> {
        if self.manifold.kind != ManifoldKind::Torus && self.manifold.l.is_some() {
            return Err(ConfigError(format!("L is only meaningful for the torus, not the {}", self.manifold.kind.name())));
        }
        let spec = ManifoldSpec::new(self.manifold.kind, self.manifold.r, self.manifold.l)?;
        let rotor = RotorParams::new(
            self.rotor.mass,
            self.rotor.inertia,
            self.rotor.hbar,
            Signature::from_sign(self.rotor.sig)?,
        )?;
        rotor.check_compatible(&spec)?;
        let potential = self.potential.clone().prepared()?;
        if spec.kind() != ManifoldKind::Pseudosphere && self.grid.theta_max.is_some() {
            return Err(ConfigError("grid.theta_max applies to the pseudosphere only".into()));
        }
        let grid = Grid::for_domain(spec.theta_domain(), self.grid.n, self.grid.theta_max)?;
        self.grid.n = Some(grid.n());
        if spec.kind() == ManifoldKind::Pseudosphere {
            self.grid.theta_max = Some(grid.theta_max());
        }
        if self.solver.k == 0 || self.solver.k > grid.n() {
            return Err(ConfigError(format!("solver.k must lie in 1..={}, got {}", grid.n(), self.solver.k)));
        }
        if let Some(g) = &self.geodesic {
            if !(g.dt > 0.0 && g.dt.is_finite()) {
                return Err(ConfigError(format!("geodesic.dt must be positive, got {}", g.dt)));
            }
            if g.every == 0 {
                return Err(ConfigError("geodesic.every must be at least 1".into()));
            }
            if g.q.iter().chain(&g.p).any(|x| !x.is_finite()) {
                return Err(ConfigError("geodesic initial state must be finite".into()));
            }
        }
        if let Some(h) = &self.hj {
            if ![h.energy, h.mu, h.sigma].iter().all(|x| x.is_finite()) {
                return Err(ConfigError("hj E, mu and sigma must be finite".into()));
            }
        }
        Ok(Resolved {
            spec,
            rotor,
            potential,
            grid,
        })
    }

    pub fn ranges(&self) -> ([i64; 2], [i64; 2]) {
        let q = &self.quantum;
        (q.m_range.unwrap_or([q.m, q.m]), q.s_range.unwrap_or([q.s, q.s]))
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

/// `a:b` (inclusive).
fn parse_range(flag: &str, text: &str) -> Result<[i64; 2], ConfigError> {
    let bad = || ConfigError(format!("{flag} expects LO:HI, got {text:?}"));
    let (lo, hi) = text.split_once(':').ok_or_else(bad)?;
    let lo = lo.trim().parse().map_err(|_| bad())?;
    let hi = hi.trim().parse().map_err(|_| bad())?;
    Ok([lo, hi])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected() {
        let err = serde_json::from_str::<RunConfig>(r#"{"manifold": {"kind": "sphere", "radius": 1}}"#);
        assert!(err.is_err());
        assert!(serde_json::from_str::<RunConfig>(r#"{"extra": 1}"#).is_err());
        assert!(serde_json::from_str::<RunConfig>(r#"{"potential": {"kind": "cosine_well", "v0": 1, "w": 2}}"#).is_err());
    }

    #[test]
    fn resolved_config_round_trips() {
        let mut c: RunConfig = serde_json::from_str(
            r#"{"manifold": {"kind": "pseudosphere", "R": 2}, "potential": {"kind": "harmonic", "v0": 1.5}}"#,
        )
        .unwrap();
        c.resolve().unwrap();
        assert!(c.grid.n.is_some() && c.grid.theta_max.is_some());
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), c);
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("x", "-2:3").unwrap(), [-2, 3]);
        assert!(parse_range("x", "2").is_err());
        let c = RunConfig::default();
        assert_eq!(c.ranges(), ([0, 0], [0, 0]));
    }

    #[test]
    fn invalid_physics_is_a_config_error() {
        let mut c = RunConfig::default();
        c.manifold.r = -1.0;
        assert!(c.resolve().is_err());
        let mut c = RunConfig::default();
        c.manifold.kind = ManifoldKind::Torus;
        assert!(c.resolve().is_err());
        c.manifold.l = Some(3.0);
        assert!(c.resolve().is_ok());
    }
}
