//! Config resolution: flags, TOML file, built-in defaults.
//!
//! Precedence is strict and uniform for every field: a command-line flag
//! beats the config file, and the config file beats the built-in default.
//! The TOML file mirrors the flag names per subcommand section, e.g.
//!
//! ```toml
//! [trajectory]
//! mode = "both"
//! t-end = 200.0
//! ```
//!
//! Unknown keys are rejected (typos should fail loudly, not silently fall
//! back to defaults). All numeric values are validated here — by handing
//! them to the library constructors wherever one exists — before any
//! output file is created, so a rejected config never leaves partial
//! output behind.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use lvflow::critical_points::ScanConfig;
use lvflow::dynamics::IntegratorConfig;
use lvflow::lotka_volterra::{LvParams, PhasePoint};
use lvflow::wigner_flow::{GaussianEnsemble, SeriesTruncation};

use crate::args::{
    EquilibriaArgs, ExtinctionArgs, FlowFieldArgs, RunMode, TrajectoryArgs, VerifyArgs,
};
use crate::error::CliError;

// ---------------------------------------------------------------------------
// Built-in defaults (quoted in --help and in config.example.toml)
// ---------------------------------------------------------------------------

pub const DEFAULT_A: f64 = 1.0;
pub const DEFAULT_RANGE: f64 = 3.0;
pub const DEFAULT_GRID_RESOLUTION: usize = 256;
pub const DEFAULT_FLOW_ALPHA: f64 = 0.5;
pub const DEFAULT_ORBIT_ALPHA: f64 = 0.25;
pub const DEFAULT_X0: f64 = 1.0;
pub const DEFAULT_K0: f64 = 0.0;
pub const DEFAULT_EXTINCTION_THRESHOLD: f64 = 0.04;
pub const DEFAULT_SPEED_THRESHOLD: f64 = 0.07;
pub const DEFAULT_ETA_MAX: u32 = 25;
pub const DEFAULT_SWEEP_ALPHAS: [f64; 2] = [0.25, 1.5];

pub const DEFAULT_FLOW_OUT: &str = "flow_field.csv";
pub const DEFAULT_TRAJECTORY_OUT: &str = "trajectory.csv";
pub const DEFAULT_EQUILIBRIA_OUT: &str = "equilibria.json";
pub const DEFAULT_EXTINCTION_OUT: &str = "extinction.json";

// ---------------------------------------------------------------------------
// TOML file shape
// ---------------------------------------------------------------------------

/// Top-level config file: one optional section per subcommand.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    #[serde(default)]
    pub flow_field: FlowFieldFile,
    #[serde(default)]
    pub trajectory: TrajectoryFile,
    #[serde(default)]
    pub equilibria: EquilibriaFile,
    #[serde(default)]
    pub extinction: ExtinctionFile,
    #[serde(default)]
    pub verify: VerifyFile,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FlowFieldFile {
    pub alpha: Option<f64>,
    pub a: Option<f64>,
    pub range: Option<f64>,
    pub resolution: Option<usize>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct TrajectoryFile {
    pub mode: Option<String>,
    pub a: Option<f64>,
    pub alpha: Option<f64>,
    pub x0: Option<f64>,
    pub k0: Option<f64>,
    pub t_end: Option<f64>,
    pub sample_interval: Option<f64>,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_step: Option<f64>,
    pub threshold: Option<f64>,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct EquilibriaFile {
    pub alphas: Option<Vec<f64>>,
    pub a: Option<f64>,
    pub range: Option<f64>,
    pub resolution: Option<usize>,
    pub speed_threshold: Option<f64>,
    pub out: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ExtinctionFile {
    pub mode: Option<String>,
    pub a: Option<f64>,
    pub alpha: Option<f64>,
    pub x0: Option<f64>,
    pub k0: Option<f64>,
    pub t_end: Option<f64>,
    pub sample_interval: Option<f64>,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_step: Option<f64>,
    pub threshold: Option<f64>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct VerifyFile {
    pub eta_max: Option<u32>,
    pub report: Option<PathBuf>,
}

/// Read and parse the optional `--config` file.
pub fn load(path: Option<&Path>) -> Result<FileConfig, CliError> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text)
        .map_err(|e| CliError::Validation(format!("config {}: {e}", path.display())))
}

// ---------------------------------------------------------------------------
// Resolved (validated) run configurations
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub struct FlowFieldRun {
    pub ens: GaussianEnsemble,
    pub params: LvParams,
    pub range: f64,
    pub resolution: usize,
    pub out: PathBuf,
}

#[derive(Debug)]
pub struct TrajectoryRun {
    pub mode: RunMode,
    pub params: LvParams,
    /// Present whenever a quantum leg runs.
    pub ens: Option<GaussianEnsemble>,
    pub start: PhasePoint,
    pub integ: IntegratorConfig,
    pub threshold: Option<f64>,
    pub out: PathBuf,
    pub svg: Option<PathBuf>,
}

#[derive(Debug)]
pub struct EquilibriaRun {
    pub alphas: Vec<f64>,
    pub params: LvParams,
    pub scan: ScanConfig,
    pub out: PathBuf,
    pub svg: Option<PathBuf>,
}

#[derive(Debug)]
pub struct ExtinctionRun {
    pub mode: RunMode,
    pub params: LvParams,
    pub ens: Option<GaussianEnsemble>,
    pub start: PhasePoint,
    pub integ: IntegratorConfig,
    pub threshold: f64,
    pub out: PathBuf,
}

#[derive(Debug)]
pub struct VerifyRun {
    pub trunc: SeriesTruncation,
    pub report: Option<PathBuf>,
    /// 1.0 in production; 1 + 1e-6 under the hidden fault-injection flag.
    pub fault_scale: f64,
}

fn pick<T: Clone>(flag: &Option<T>, file: &Option<T>, default: T) -> T {
    flag.clone().or_else(|| file.clone()).unwrap_or(default)
}

fn pick_opt<T: Clone>(flag: &Option<T>, file: &Option<T>) -> Option<T> {
    flag.clone().or_else(|| file.clone())
}

fn parse_mode(s: &str) -> Result<RunMode, CliError> {
    match s {
        "classical" => Ok(RunMode::Classical),
        "quantum" => Ok(RunMode::Quantum),
        "both" => Ok(RunMode::Both),
        other => Err(CliError::Validation(format!(
            "mode must be classical, quantum, or both; got {other:?}"
        ))),
    }
}

fn pick_mode(
    flag: Option<RunMode>,
    file: &Option<String>,
    default: RunMode,
) -> Result<RunMode, CliError> {
    if let Some(m) = flag {
        return Ok(m);
    }
    match file {
        Some(s) => parse_mode(s),
        None => Ok(default),
    }
}

fn require_finite(what: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Validation(format!("{what} must be finite, got {v}")))
    }
}

fn require_positive(what: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::Validation(format!("{what} must be a positive finite number, got {v}")))
    }
}

/// Square scan window `[-range, range]^2`; shared by flow-field and
/// equilibria.
fn square_window(range: f64) -> Result<(f64, f64), CliError> {
    let range = require_positive("range", range)?;
    Ok((-range, range))
}

pub fn resolve_flow_field(
    args: &FlowFieldArgs,
    file: &FlowFieldFile,
) -> Result<FlowFieldRun, CliError> {
    let alpha = pick(&args.alpha, &file.alpha, DEFAULT_FLOW_ALPHA);
    let a = pick(&args.a, &file.a, DEFAULT_A);
    let range = pick(&args.range, &file.range, DEFAULT_RANGE);
    let resolution = pick(&args.resolution, &file.resolution, DEFAULT_GRID_RESOLUTION);

    let ens = GaussianEnsemble::new(alpha)?;
    let params = LvParams::new(a)?;
    let (lo, hi) = square_window(range)?;
    debug_assert_eq!(lo, -hi);
    if resolution < 2 {
        return Err(CliError::Validation(format!(
            "resolution must be at least 2, got {resolution}"
        )));
    }
    Ok(FlowFieldRun {
        ens,
        params,
        range: hi,
        resolution,
        out: pick(&args.out, &file.out, PathBuf::from(DEFAULT_FLOW_OUT)),
    })
}

/// Shared resolution of the orbit-integration block (trajectory and
/// extinction use identical fields).
#[allow(clippy::too_many_arguments)]
fn resolve_orbit(
    mode: RunMode,
    a: f64,
    alpha: f64,
    x0: f64,
    k0: f64,
    t_end: f64,
    sample_interval: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_step: f64,
) -> Result<(LvParams, Option<GaussianEnsemble>, PhasePoint, IntegratorConfig), CliError> {
    let params = LvParams::new(a)?;
    let ens = match mode {
        RunMode::Classical => None,
        RunMode::Quantum | RunMode::Both => Some(GaussianEnsemble::new(alpha)?),
    };
    let start = PhasePoint::new(require_finite("x0", x0)?, require_finite("k0", k0)?);
    let integ = IntegratorConfig { rel_tol, abs_tol, max_step, t_end, sample_interval };
    integ.validate()?;
    Ok((params, ens, start, integ))
}

pub fn resolve_trajectory(
    args: &TrajectoryArgs,
    file: &TrajectoryFile,
) -> Result<TrajectoryRun, CliError> {
    let defaults = IntegratorConfig::default();
    let mode = pick_mode(args.mode, &file.mode, RunMode::Both)?;
    let (params, ens, start, integ) = resolve_orbit(
        mode,
        pick(&args.a, &file.a, DEFAULT_A),
        pick(&args.alpha, &file.alpha, DEFAULT_ORBIT_ALPHA),
        pick(&args.x0, &file.x0, DEFAULT_X0),
        pick(&args.k0, &file.k0, DEFAULT_K0),
        pick(&args.t_end, &file.t_end, defaults.t_end),
        pick(&args.sample_interval, &file.sample_interval, defaults.sample_interval),
        pick(&args.rel_tol, &file.rel_tol, defaults.rel_tol),
        pick(&args.abs_tol, &file.abs_tol, defaults.abs_tol),
        pick(&args.max_step, &file.max_step, defaults.max_step),
    )?;
    let threshold = pick_opt(&args.threshold, &file.threshold)
        .map(|t| require_positive("threshold", t))
        .transpose()?;
    Ok(TrajectoryRun {
        mode,
        params,
        ens,
        start,
        integ,
        threshold,
        out: pick(&args.out, &file.out, PathBuf::from(DEFAULT_TRAJECTORY_OUT)),
        svg: pick_opt(&args.svg, &file.svg),
    })
}

pub fn resolve_equilibria(
    args: &EquilibriaArgs,
    file: &EquilibriaFile,
) -> Result<EquilibriaRun, CliError> {
    let alphas = pick(&args.alphas, &file.alphas, DEFAULT_SWEEP_ALPHAS.to_vec());
    if alphas.is_empty() {
        return Err(CliError::Validation("alphas list must not be empty".into()));
    }
    for &alpha in &alphas {
        // Reject bad sweep entries up front; the sweep itself reports
        // per-entry errors without this guard, but a config full of junk
        // should fail fast instead of producing an all-error census.
        GaussianEnsemble::new(alpha)?;
    }
    let params = LvParams::new(pick(&args.a, &file.a, DEFAULT_A))?;
    let range = pick(&args.range, &file.range, DEFAULT_RANGE);
    let window = square_window(range)?;
    let scan = ScanConfig::new(
        window,
        window,
        pick(&args.resolution, &file.resolution, DEFAULT_GRID_RESOLUTION),
        pick(&args.speed_threshold, &file.speed_threshold, DEFAULT_SPEED_THRESHOLD),
    )?;
    Ok(EquilibriaRun {
        alphas,
        params,
        scan,
        out: pick(&args.out, &file.out, PathBuf::from(DEFAULT_EQUILIBRIA_OUT)),
        svg: pick_opt(&args.svg, &file.svg),
    })
}

pub fn resolve_extinction(
    args: &ExtinctionArgs,
    file: &ExtinctionFile,
) -> Result<ExtinctionRun, CliError> {
    let defaults = IntegratorConfig::default();
    let mode = pick_mode(args.mode, &file.mode, RunMode::Quantum)?;
    if mode == RunMode::Both {
        return Err(CliError::Validation(
            "extinction runs one orbit; mode must be classical or quantum".into(),
        ));
    }
    let (params, ens, start, integ) = resolve_orbit(
        mode,
        pick(&args.a, &file.a, DEFAULT_A),
        pick(&args.alpha, &file.alpha, DEFAULT_ORBIT_ALPHA),
        pick(&args.x0, &file.x0, DEFAULT_X0),
        pick(&args.k0, &file.k0, DEFAULT_K0),
        pick(&args.t_end, &file.t_end, defaults.t_end),
        pick(&args.sample_interval, &file.sample_interval, defaults.sample_interval),
        pick(&args.rel_tol, &file.rel_tol, defaults.rel_tol),
        pick(&args.abs_tol, &file.abs_tol, defaults.abs_tol),
        pick(&args.max_step, &file.max_step, defaults.max_step),
    )?;
    let threshold = require_positive(
        "threshold",
        pick(&args.threshold, &file.threshold, DEFAULT_EXTINCTION_THRESHOLD),
    )?;
    Ok(ExtinctionRun {
        mode,
        params,
        ens,
        start,
        integ,
        threshold,
        out: pick(&args.out, &file.out, PathBuf::from(DEFAULT_EXTINCTION_OUT)),
    })
}

pub fn resolve_verify(args: &VerifyArgs, file: &VerifyFile) -> Result<VerifyRun, CliError> {
    let trunc = SeriesTruncation::new(pick(&args.eta_max, &file.eta_max, DEFAULT_ETA_MAX))?;
    Ok(VerifyRun {
        trunc,
        report: pick_opt(&args.report, &file.report),
        fault_scale: if args.inject_divergence_fault { 1.0 + 1e-6 } else { 1.0 },
    })
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
