//! Command-line surface: the clap derive tree.
//!
//! Every tunable is an `Option` here; defaults are applied in
//! [`crate::config`] so that a value can come from (in priority order) the
//! flag, the `--config` TOML file, or the built-in default. The help text
//! quotes the built-in defaults.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Which velocity field drives an orbit run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RunMode {
    /// Coupled prey-predator rate equations.
    Classical,
    /// Ensemble-corrected phase-space velocity field.
    Quantum,
    /// Both fields from the same start, sampled on the same time grid.
    Both,
}

#[derive(Debug, Parser)]
#[command(
    name = "lvflow",
    version,
    about = "Phase-space flow analysis for prey-predator dynamics with gaussian quantum ensembles",
    long_about = "Phase-space flow analysis for prey-predator dynamics with gaussian quantum \
                  ensembles.\n\nAll data files are deterministic for a fixed configuration: \
                  reruns are byte-identical, and run metadata lives in a sidecar \
                  <out>.meta.json rather than inside the data. Set LVFLOW_THREADS to cap the \
                  worker-thread count (default: all cores).\n\nExit codes: 0 success, \
                  1 validation error, 2 numerical failure, 3 i/o error."
)]
pub struct Cli {
    /// TOML config file; command-line flags override its values.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate density, velocity, and divergences over a phase-space grid
    FlowField(FlowFieldArgs),
    /// Integrate classical and/or quantum orbits and export the sampled series
    Trajectory(TrajectoryArgs),
    /// Scan for slow-speed envelopes and classify velocity-field zeros
    Equilibria(EquilibriaArgs),
    /// Detect below-threshold extinction windows along an orbit
    Extinction(ExtinctionArgs),
    /// Run the numerical cross-validation suite and report max errors
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct FlowFieldArgs {
    /// Gaussian spreading parameter [default: 0.5]
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,

    /// Prey-predator coupling [default: 1]
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,

    /// Half-width of the square window [-range, range]^2 [default: 3]
    #[arg(long, allow_negative_numbers = true)]
    pub range: Option<f64>,

    /// Grid nodes per axis [default: 256]
    #[arg(long)]
    pub resolution: Option<usize>,

    /// Output table path [default: flow_field.csv]
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrajectoryArgs {
    /// Velocity field: classical, quantum, or both [default: both]
    #[arg(long, value_enum)]
    pub mode: Option<RunMode>,

    /// Prey-predator coupling [default: 1]
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,

    /// Gaussian spreading parameter (quantum modes) [default: 0.25]
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,

    /// Start coordinate x = -ln y [default: 1]
    #[arg(long, allow_negative_numbers = true)]
    pub x0: Option<f64>,

    /// Start coordinate k = -ln z [default: 0]
    #[arg(long, allow_negative_numbers = true)]
    pub k0: Option<f64>,

    /// Integration span in dimensionless time [default: 100]
    #[arg(long, allow_negative_numbers = true)]
    pub t_end: Option<f64>,

    /// Output cadence [default: 0.05]
    #[arg(long, allow_negative_numbers = true)]
    pub sample_interval: Option<f64>,

    /// Relative step-error tolerance [default: 1e-9]
    #[arg(long, allow_negative_numbers = true)]
    pub rel_tol: Option<f64>,

    /// Absolute step-error tolerance [default: 1e-12]
    #[arg(long, allow_negative_numbers = true)]
    pub abs_tol: Option<f64>,

    /// Step-size ceiling [default: 0.1]
    #[arg(long, allow_negative_numbers = true)]
    pub max_step: Option<f64>,

    /// Species-density extinction bar; when set, an extinction report is
    /// written next to the table as <out>.report.json
    #[arg(long, allow_negative_numbers = true)]
    pub threshold: Option<f64>,

    /// Output table path [default: trajectory.csv]
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Also emit a simple SVG plot of the species time series
    #[arg(long, value_name = "PATH")]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EquilibriaArgs {
    /// Comma-separated spreading parameters to sweep [default: 0.25,1.5]
    #[arg(long, value_delimiter = ',', value_name = "A1,A2,...", allow_negative_numbers = true)]
    pub alphas: Option<Vec<f64>>,

    /// Prey-predator coupling [default: 1]
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,

    /// Half-width of the scan window [-range, range]^2 [default: 3]
    #[arg(long, allow_negative_numbers = true)]
    pub range: Option<f64>,

    /// Scan nodes per axis [default: 256]
    #[arg(long)]
    pub resolution: Option<usize>,

    /// Slow-speed envelope bar |w| < threshold [default: 0.07]
    #[arg(long, allow_negative_numbers = true)]
    pub speed_threshold: Option<f64>,

    /// Output census path [default: equilibria.json]
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Also emit a simple SVG envelope map (one panel per alpha)
    #[arg(long, value_name = "PATH")]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExtinctionArgs {
    /// Velocity field: classical or quantum [default: quantum]
    #[arg(long, value_enum)]
    pub mode: Option<RunMode>,

    /// Prey-predator coupling [default: 1]
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,

    /// Gaussian spreading parameter (quantum mode) [default: 0.25]
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,

    /// Start coordinate x = -ln y [default: 1]
    #[arg(long, allow_negative_numbers = true)]
    pub x0: Option<f64>,

    /// Start coordinate k = -ln z [default: 0]
    #[arg(long, allow_negative_numbers = true)]
    pub k0: Option<f64>,

    /// Integration span in dimensionless time [default: 100]
    #[arg(long, allow_negative_numbers = true)]
    pub t_end: Option<f64>,

    /// Output cadence (sets window-boundary resolution) [default: 0.05]
    #[arg(long, allow_negative_numbers = true)]
    pub sample_interval: Option<f64>,

    /// Relative step-error tolerance [default: 1e-9]
    #[arg(long, allow_negative_numbers = true)]
    pub rel_tol: Option<f64>,

    /// Absolute step-error tolerance [default: 1e-12]
    #[arg(long, allow_negative_numbers = true)]
    pub abs_tol: Option<f64>,

    /// Step-size ceiling [default: 0.1]
    #[arg(long, allow_negative_numbers = true)]
    pub max_step: Option<f64>,

    /// Species-density extinction bar [default: 0.04]
    #[arg(long, allow_negative_numbers = true)]
    pub threshold: Option<f64>,

    /// Output report path [default: extinction.json]
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Series truncation depth used by the cross-checks [default: 25]
    #[arg(long)]
    pub eta_max: Option<u32>,

    /// Also write the report as structured JSON
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,

    /// Multiply the closed-form prey-current divergence by (1 + 1e-6)
    /// before every cross-check, to prove the suite detects a seeded error.
    #[arg(long, hide = true)]
    pub inject_divergence_fault: bool,
}
