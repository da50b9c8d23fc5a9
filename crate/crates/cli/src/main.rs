//! `rotorlab`: batch front end for spectra, scans, trajectories, the
//! Hamilton–Jacobi reduction and the self-check suite.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rotorlab::classical::{self, hj_radial_momentum_within, State};
use rotorlab::selfcheck::{run_checks, Fault};
use rotorlab::spectral::{self, NormConvention, DEFAULT_THETA_MAX};
use rotorlab::{Error, ManifoldKind};
use serde::de::DeserializeOwned;
use serde::Serialize;

use config::{ConfigError, Format, RunConfig};
use output::{emit, num, to_json, IntervalRow, SpectrumDoc, Status, TrajectoryDoc};

const OK: u8 = 0;
const INVARIANT_FAILURE: u8 = 1;
const CONFIG_ERROR: u8 = 2;
const SOLVER_FAILURE: u8 = 3;
const DYNAMICS_HALT: u8 = 4;

const THREADS_VAR: &str = "ROTORLAB_THREADS";

#[derive(Parser)]
#[command(name = "rotorlab", version, about = "Rigid rotors on the sphere, pseudosphere and torus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lowest radial eigenvalues for one (m, s)
    #[command(allow_negative_numbers = true)]
    Spectrum(RunArgs),
    /// Spectra over ranges of m and s
    #[command(allow_negative_numbers = true)]
    Scan(RunArgs),
    /// Integrate a trajectory with the implicit midpoint rule
    #[command(allow_negative_numbers = true)]
    Geodesic(RunArgs),
    /// Turning points, periods and actions of the latitude motion
    #[command(allow_negative_numbers = true)]
    Hj(RunArgs),
    /// Run the invariant suite
    Check(CheckArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
}

/// Flags that replace values from the configuration file.
#[derive(Args, Default)]
pub struct Overrides {
    /// sphere | pseudosphere | torus
    #[arg(long, value_parser = from_name::<ManifoldKind>)]
    pub manifold: Option<ManifoldKind>,
    #[arg(long = "R")]
    pub r: Option<f64>,
    #[arg(long = "L")]
    pub l: Option<f64>,
    #[arg(long = "M")]
    pub mass: Option<f64>,
    #[arg(long = "I")]
    pub inertia: Option<f64>,
    #[arg(long)]
    pub hbar: Option<f64>,
    #[arg(long)]
    pub sig: Option<i32>,
    /// Potential as JSON, e.g. '{"kind":"cosine_well","v0":3}'
    #[arg(long)]
    pub potential: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub theta_max: Option<f64>,
    #[arg(long)]
    pub m: Option<i64>,
    #[arg(long)]
    pub s: Option<i64>,
    /// LO:HI
    #[arg(long, allow_hyphen_values = true)]
    pub m_range: Option<String>,
    /// LO:HI
    #[arg(long, allow_hyphen_values = true)]
    pub s_range: Option<String>,
    #[arg(long)]
    pub k: Option<usize>,
    /// unit_volume | geometric_volume
    #[arg(long, value_parser = from_name::<NormConvention>)]
    pub norm: Option<NormConvention>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long = "E")]
    pub energy: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
}

#[derive(Args)]
struct CheckArgs {
    /// Accepted for symmetry with the other commands; only validated
    #[arg(long)]
    config: Option<PathBuf>,
    /// Print one JSON record per invariant
    #[arg(long)]
    json: bool,
    #[arg(long, hide = true)]
    inject_fault: Option<String>,
}

fn from_name<T: DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_value(serde_json::Value::String(s.into())).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Spectrum(a) => run(a, spectrum),
        Command::Scan(a) => run(a, scan),
        Command::Geodesic(a) => run(a, geodesic),
        Command::Hj(a) => run(a, hj),
        Command::Check(a) => check(a),
    };
    ExitCode::from(code)
}

/// Result of a command body: an exit code, with diagnostics already printed.
type Outcome = Result<u8, Failure>;

enum Failure {
    Config(String),
    Solver(Error),
    Io(std::io::Error),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.0)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(msg) => Failure::Config(msg),
            e @ (Error::Domain { .. } | Error::IncompatibleLayout { .. }) => Failure::Config(e.to_string()),
            e => Failure::Solver(e),
        }
    }
}

fn run(args: RunArgs, body: fn(&RunConfig, config::Resolved) -> Outcome) -> u8 {
    let prepared = RunConfig::load(args.config.as_deref()).and_then(|mut c| {
        c.apply(&args.overrides)?;
        let resolved = c.resolve()?;
        Ok((c, resolved))
    });
    let outcome = match prepared {
        Ok((c, resolved)) => body(&c, resolved),
        Err(e) => Err(e.into()),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure::Config(msg)) => {
            eprintln!("config error: {msg}");
            CONFIG_ERROR
        }
        Err(Failure::Solver(e)) => {
            eprintln!("solver failure: {e}");
            SOLVER_FAILURE
        }
        Err(Failure::Io(e)) => {
            eprintln!("cannot write output: {e}");
            CONFIG_ERROR
        }
    }
}

fn document<T: Serialize>(config: &RunConfig, result: T) -> String {
    #[derive(Serialize)]
    struct Doc<'a, T> {
        config: &'a RunConfig,
        result: T,
    }
    to_json(&Doc { config, result })
}

fn report_flags(r: &spectral::SpectrumResult) {
    if r.scattering {
        eprintln!("note: (m, s) = ({}, {}) has a continuous spectrum; values are box states of the truncated domain", r.m, r.s);
    }
    for w in &r.warnings {
        let spectral::SpectrumWarning::Truncation { outer_fraction, theta_max } = w;
        eprintln!("warning: ground state weight {outer_fraction:e} near theta_max = {theta_max}; increase grid.theta_max");
    }
}

fn spectrum(c: &RunConfig, r: config::Resolved) -> Outcome {
    let (m, s) = (c.quantum.m, c.quantum.s);
    let result = spectral::solve_spectrum(&r.spec, &r.rotor, m, s, &r.potential, &r.grid, c.solver.k, c.solver.norm)?;
    report_flags(&result);
    let body = match c.output.format {
        Format::Csv => output::spectrum_csv(&result),
        Format::Json => document(c, SpectrumDoc::from(&result)),
    };
    emit(c, &body)?;
    Ok(OK)
}

fn threads() -> Result<Option<usize>, ConfigError> {
    match std::env::var(THREADS_VAR) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(ConfigError(format!("{THREADS_VAR} must be a positive integer, got {v:?}"))),
        },
    }
}

fn scan(c: &RunConfig, r: config::Resolved) -> Outcome {
    let ([m0, m1], [s0, s1]) = c.ranges();
    if m0 > m1 || s0 > s1 {
        return Err(Failure::Config(format!("empty scan range m {m0}:{m1}, s {s0}:{s1}")));
    }
    let table = spectral::spectrum_scan(
        &r.spec,
        &r.rotor,
        m0..=m1,
        s0..=s1,
        &r.potential,
        &r.grid,
        c.solver.k,
        c.solver.norm,
        threads()?,
    )?;
    let mut failed = 0;
    for ((m, s), cell) in &table.cells {
        match cell {
            Ok(result) => report_flags(result),
            Err(e) => {
                failed += 1;
                eprintln!("cell (m, s) = ({m}, {s}) failed: {e}");
            }
        }
    }
    let body = match c.output.format {
        Format::Csv => {
            let mut out = format!("m,s,{}\n", output::SPECTRUM_HEADER);
            for ((m, s), cell) in &table.cells {
                if let Ok(result) = cell {
                    output::spectrum_rows(result, &format!("{m},{s},"), &mut out);
                }
            }
            out
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Cell<'a> {
                m: i64,
                s: i64,
                #[serde(skip_serializing_if = "Option::is_none")]
                error: Option<String>,
                #[serde(skip_serializing_if = "Option::is_none")]
                spectrum: Option<SpectrumDoc<'a>>,
            }
            let cells: Vec<Cell> = table
                .cells
                .iter()
                .map(|(&(m, s), cell)| Cell {
                    m,
                    s,
                    error: cell.as_ref().err().map(|e| e.to_string()),
                    spectrum: cell.as_ref().ok().map(SpectrumDoc::from),
                })
                .collect();
            document(c, cells)
        }
    };
    emit(c, &body)?;
    Ok(if failed > 0 { SOLVER_FAILURE } else { OK })
}

fn geodesic(c: &RunConfig, r: config::Resolved) -> Outcome {
    let g = c
        .geodesic
        .clone()
        .ok_or_else(|| Failure::Config("geodesic needs a geodesic block with q, p, dt and steps".into()))?;
    let s0 = State::new(g.q.into(), g.p.into());
    let (record, status, code) = match classical::integrate(&r.spec, &r.rotor, &r.potential, &s0, g.dt, g.steps) {
        Ok(record) => (record, Status::Completed, OK),
        Err(Error::PoleApproach { time, theta, partial }) => {
            eprintln!("halted: trajectory reached theta = {} at t = {}, within the pole guard", num(theta), num(time));
            (*partial, Status::PoleApproach { time, theta }, DYNAMICS_HALT)
        }
        Err(e) => return Err(e.into()),
    };
    eprintln!(
        "max drift: energy {:e}, p_phi {:e}, p_psi {:e}",
        record.max_energy_drift(),
        record.max_p_phi_drift(),
        record.max_p_psi_drift()
    );
    let body = match c.output.format {
        Format::Csv => output::trajectory_csv(&record, g.every, &status),
        Format::Json => to_json(&TrajectoryDoc::new(c, &record, g.every, status)),
    };
    emit(c, &body)?;
    Ok(code)
}

fn hj(c: &RunConfig, r: config::Resolved) -> Outcome {
    let h = c
        .hj
        .clone()
        .ok_or_else(|| Failure::Config("hj needs E, mu and sigma (an hj block or --E/--mu/--sigma)".into()))?;
    let bound = match r.spec.kind() {
        ManifoldKind::Pseudosphere => c.grid.theta_max.unwrap_or(DEFAULT_THETA_MAX),
        _ => DEFAULT_THETA_MAX,
    };
    let radial = hj_radial_momentum_within(&r.spec, &r.rotor, &r.potential, h.energy, h.mu, h.sigma, bound)?;
    let rows: Vec<IntervalRow> = radial
        .intervals()
        .iter()
        .map(|i| {
            let (period, action) = if i.is_bound() {
                (Some(radial.period(i)?), Some(radial.action(i)?))
            } else {
                (None, None)
            };
            Ok(IntervalRow::new(i, period, action))
        })
        .collect::<Result<_, Error>>()?;
    for row in rows.iter().filter(|r| r.period.is_some()) {
        eprintln!("bound: theta in [{}, {}], period {}", num(row.lo), num(row.hi), num(row.period.unwrap()));
    }
    let body = match c.output.format {
        Format::Csv => output::hj_csv(&rows),
        Format::Json => {
            #[derive(Serialize)]
            struct Hj {
                turning_points: Vec<f64>,
                intervals: Vec<IntervalRow>,
            }
            document(
                c,
                Hj {
                    turning_points: radial.turning_points(),
                    intervals: rows,
                },
            )
        }
    };
    emit(c, &body)?;
    Ok(OK)
}

fn check(args: CheckArgs) -> u8 {
    if let Some(path) = &args.config {
        let validated = RunConfig::load(Some(path)).and_then(|mut c| c.resolve().map(|_| ()));
        if let Err(e) = validated {
            eprintln!("config error: {e}");
            return CONFIG_ERROR;
        }
    }
    let fault = match args.inject_fault.as_deref().map(|f| (f, Fault::parse(f))) {
        None => None,
        Some((_, Some(fault))) => Some(fault),
        Some((name, None)) => {
            eprintln!("config error: unknown fault {name:?}");
            return CONFIG_ERROR;
        }
    };
    let report = run_checks(fault);
    if args.json {
        print!("{}", to_json(&report.outcomes));
    } else {
        let width = report.outcomes.iter().map(|o| o.name.len()).max().unwrap_or(0);
        for o in &report.outcomes {
            let mark = if o.passed { "PASS" } else { "FAIL" };
            println!("{:>2}  {mark}  {:width$}  {:>7.3} s  {}", o.id, o.name, o.seconds, o.detail);
        }
        let passed = report.outcomes.iter().filter(|o| o.passed).count();
        println!("{passed}/{} invariants hold", report.outcomes.len());
    }
    for o in report.failures() {
        eprintln!("failed invariant {}: {} ({})", o.id, o.name, o.detail);
    }
    if report.all_passed() {
        OK
    } else {
        INVARIANT_FAILURE
    }
}
