//! Table and document writers. Numbers use the shortest decimal form that
//! parses back to the same `f64`, so identical runs give identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use rotorlab::classical::{AllowedInterval, TrajectoryRecord};
use rotorlab::spectral::{NormConvention, SpectrumResult, SpectrumWarning};
use rotorlab::ManifoldKind;
use serde::Serialize;

use crate::config::RunConfig;

pub fn num(x: f64) -> String {
    format!("{x:?}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Writes `body` to the configured path (or standard output) and the
/// effective configuration to `<path>.config.json` (or standard error).
pub fn emit(config: &RunConfig, body: &str) -> io::Result<()> {
    match &config.output.path {
        Some(path) => {
            fs::write(path, body)?;
            fs::write(config_path(path), to_json(config))
        }
        None => {
            io::stdout().write_all(body.as_bytes())?;
            eprintln!("effective config: {}", serde_json::to_string(config).expect("config serializes"));
            Ok(())
        }
    }
}

pub fn config_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".config.json");
    PathBuf::from(name)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("result serializes") + "\n"
}

pub const SPECTRUM_HEADER: &str = "index,eps,E_physical,convergence_estimate";

pub fn spectrum_rows(r: &SpectrumResult, prefix: &str, out: &mut String) {
    for (i, (eps, e)) in r.eigenvalues_dimensionless.iter().zip(&r.eigenvalues_physical).enumerate() {
        writeln!(out, "{prefix}{i},{},{},{}", num(*eps), num(*e), opt(r.convergence[i])).unwrap();
    }
}

pub fn spectrum_csv(r: &SpectrumResult) -> String {
    let mut out = format!("{SPECTRUM_HEADER}\n");
    spectrum_rows(r, "", &mut out);
    out
}

#[derive(Serialize)]
pub struct SpectrumDoc<'a> {
    pub kind: ManifoldKind,
    pub m: i64,
    pub s: i64,
    pub eigenvalues_dimensionless: &'a [f64],
    pub eigenvalues_physical: &'a [f64],
    pub convergence_estimate: &'a [Option<f64>],
    pub norm_convention: NormConvention,
    pub normalization_factor: f64,
    pub scattering: bool,
    pub warnings: &'a [SpectrumWarning],
    pub spacing: f64,
    pub nodes: &'a [f64],
    pub eigenfunctions: &'a [Vec<f64>],
}

impl<'a> From<&'a SpectrumResult> for SpectrumDoc<'a> {
    fn from(r: &'a SpectrumResult) -> Self {
        Self {
            kind: r.kind,
            m: r.m,
            s: r.s,
            eigenvalues_dimensionless: &r.eigenvalues_dimensionless,
            eigenvalues_physical: &r.eigenvalues_physical,
            convergence_estimate: &r.convergence,
            norm_convention: r.norm_convention,
            normalization_factor: r.normalization_factor,
            scattering: r.scattering,
            warnings: &r.warnings,
            spacing: r.spacing,
            nodes: &r.nodes,
            eigenfunctions: &r.eigenfunctions,
        }
    }
}

/// How a trajectory run ended.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Status {
    Completed,
    PoleApproach { time: f64, theta: f64 },
}

impl Status {
    fn line(&self) -> String {
        match self {
            Status::Completed => "# status: completed\n".into(),
            Status::PoleApproach { time, theta } => {
                format!("# status: pole_approach time={} theta={}\n", num(*time), num(*theta))
            }
        }
    }
}

pub const TRAJECTORY_HEADER: &str = "t,theta,phi,psi,p_theta,p_phi,p_psi,H,energy_drift,p_phi_drift,p_psi_drift";

pub fn trajectory_csv(record: &TrajectoryRecord, every: usize, status: &Status) -> String {
    let mut out = format!("{TRAJECTORY_HEADER}\n");
    for i in sampled(record.len(), every) {
        let (q, p) = (record.states[i].q, record.states[i].p);
        let row = [
            record.times[i],
            q.x,
            q.y,
            q.z,
            p.x,
            p.y,
            p.z,
            record.energies[i],
            record.energy_drift[i],
            record.p_phi_drift[i],
            record.p_psi_drift[i],
        ];
        let row: Vec<String> = row.iter().map(|x| num(*x)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out.push_str(&status.line());
    out
}

/// Every `every`-th index, always including the last sample.
fn sampled(len: usize, every: usize) -> impl Iterator<Item = usize> {
    (0..len).filter(move |&i| i % every == 0 || i + 1 == len)
}

#[derive(Serialize)]
pub struct TrajectoryDoc<'a> {
    pub config: &'a RunConfig,
    pub status: Status,
    pub max_energy_drift: f64,
    pub max_p_phi_drift: f64,
    pub max_p_psi_drift: f64,
    pub t: Vec<f64>,
    pub q: Vec<[f64; 3]>,
    pub p: Vec<[f64; 3]>,
    #[serde(rename = "H")]
    pub energy: Vec<f64>,
}

impl<'a> TrajectoryDoc<'a> {
    pub fn new(config: &'a RunConfig, record: &TrajectoryRecord, every: usize, status: Status) -> Self {
        let idx: Vec<usize> = sampled(record.len(), every).collect();
        Self {
            config,
            status,
            max_energy_drift: record.max_energy_drift(),
            max_p_phi_drift: record.max_p_phi_drift(),
            max_p_psi_drift: record.max_p_psi_drift(),
            t: idx.iter().map(|&i| record.times[i]).collect(),
            q: idx.iter().map(|&i| record.states[i].q.into()).collect(),
            p: idx.iter().map(|&i| record.states[i].p.into()).collect(),
            energy: idx.iter().map(|&i| record.energies[i]).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IntervalRow {
    pub lo: f64,
    pub hi: f64,
    pub lo_turning: bool,
    pub hi_turning: bool,
    pub period: Option<f64>,
    pub action: Option<f64>,
}

impl IntervalRow {
    pub fn new(i: &AllowedInterval, period: Option<f64>, action: Option<f64>) -> Self {
        Self {
            lo: i.lo,
            hi: i.hi,
            lo_turning: i.lo_turning,
            hi_turning: i.hi_turning,
            period,
            action,
        }
    }
}

pub const HJ_HEADER: &str = "lo,hi,lo_turning,hi_turning,period,action";

pub fn hj_csv(rows: &[IntervalRow]) -> String {
    let mut out = format!("{HJ_HEADER}\n");
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            num(r.lo),
            num(r.hi),
            r.lo_turning,
            r.hi_turning,
            opt(r.period),
            opt(r.action)
        )
        .unwrap();
    }
    out
}
