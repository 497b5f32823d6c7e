//! `lvflow`: command-line front end for phase-space flow analysis of
//! prey-predator dynamics with gaussian quantum ensembles.
//!
//! Five subcommands drive the library: `flow-field` (grid scans),
//! `trajectory` (orbit integration and export), `equilibria`
//! (envelope/zero censuses), `extinction` (below-threshold window
//! reports), and `verify` (the numerical cross-validation suite). All
//! data files are deterministic for a fixed configuration; run metadata
//! lives in `<out>.meta.json` sidecars. `LVFLOW_THREADS` caps the worker
//! pool. Exit codes: 0 success, 1 validation error, 2 numerical failure,
//! 3 i/o error.

mod args;
mod config;
mod equilibria;
mod error;
mod extinction;
mod flow_field;
mod output;
mod svg;
mod trajectory;
mod verify;

use clap::Parser;

use args::{Cli, Command};
use error::CliError;

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help/--version are successful exits; anything else is a
            // usage problem and maps to the validation code.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };

    match dispatch(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("lvflow: {e}");
            e.exit_code()
        }
    }
}

/// Honor `LVFLOW_THREADS` before any parallel region spins up.
fn init_thread_pool() -> Result<(), CliError> {
    let raw = match std::env::var("LVFLOW_THREADS") {
        Ok(v) => v,
        Err(std::env::VarError::NotPresent) => return Ok(()),
        Err(e) => return Err(CliError::Validation(format!("LVFLOW_THREADS: {e}"))),
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| {
            CliError::Validation(format!(
                "LVFLOW_THREADS must be a positive integer, got {raw:?}"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Validation(format!("thread pool: {e}")))
}

fn dispatch(cli: &Cli) -> Result<(), CliError> {
    init_thread_pool()?;
    let file = config::load(cli.config.as_deref())?;
    match &cli.command {
        Command::FlowField(a) => {
            flow_field::run(&config::resolve_flow_field(a, &file.flow_field)?)
        }
        Command::Trajectory(a) => {
            trajectory::run(&config::resolve_trajectory(a, &file.trajectory)?)
        }
        Command::Equilibria(a) => {
            equilibria::run(&config::resolve_equilibria(a, &file.equilibria)?)
        }
        Command::Extinction(a) => {
            extinction::run(&config::resolve_extinction(a, &file.extinction)?)
        }
        Command::Verify(a) => verify::run(&config::resolve_verify(a, &file.verify)?),
    }
}
