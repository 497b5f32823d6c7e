//! `trajectory`: integrate classical and/or quantum orbits from one start
//! and export the sampled series as one table.
//!
//! With `--mode both` the classical block comes first, then the quantum
//! block; both are sampled on the identical time grid (exact multiples of
//! the cadence), so the two series overlay row-for-row.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use lvflow::dynamics::{detect_extinctions, integrate, Mode, Trajectory};

use crate::args::RunMode;
use crate::config::TrajectoryRun;
use crate::error::CliError;
use crate::extinction::report_doc;
use crate::output::{fmt_float, render_json, sidecar_path, OutputSlot};
use crate::svg::{line_plot, Series, LINE_COLORS};

pub const COLUMNS: [&str; 7] = ["tau", "x", "k", "y", "z", "energy", "mode"];

/// Extinction-report path for a trajectory table: `<out>.report.json`.
pub fn report_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".report.json");
    out.with_file_name(name)
}

fn render_table(legs: &[Trajectory]) -> String {
    let rows: usize = legs.iter().map(|t| t.times.len()).sum();
    let mut table = String::with_capacity(rows * 80 + 64);
    table.push_str(&COLUMNS.join(","));
    table.push('\n');
    for leg in legs {
        let mode = leg.mode.to_string();
        for i in 0..leg.times.len() {
            let _ = writeln!(
                table,
                "{},{},{},{},{},{},{}",
                fmt_float(leg.times[i]),
                fmt_float(leg.points[i].x),
                fmt_float(leg.points[i].k),
                fmt_float(leg.species[i].y),
                fmt_float(leg.species[i].z),
                fmt_float(leg.energy[i]),
                mode,
            );
        }
    }
    table
}

fn render_species_svg(legs: &[Trajectory], a: f64, alpha: Option<f64>) -> String {
    let mut series = Vec::new();
    for leg in legs {
        let dashed = leg.mode == Mode::Classical;
        let tag = leg.mode.to_string();
        series.push(Series {
            label: format!("prey ({tag})"),
            points: leg.times.iter().zip(&leg.species).map(|(&t, s)| (t, s.y)).collect(),
            color: LINE_COLORS[0],
            dashed,
        });
        series.push(Series {
            label: format!("predator ({tag})"),
            points: leg.times.iter().zip(&leg.species).map(|(&t, s)| (t, s.z)).collect(),
            color: LINE_COLORS[1],
            dashed,
        });
    }
    let title = match alpha {
        Some(alpha) => format!("Species time evolution (a = {}, alpha = {})", a, alpha),
        None => format!("Species time evolution (a = {})", a),
    };
    line_plot(&title, "tau", "species density", &series)
}

pub fn run(cfg: &TrajectoryRun) -> Result<(), CliError> {
    // Claim every requested output before integrating.
    let data = OutputSlot::claim(&cfg.out)?;
    let meta = OutputSlot::claim(&sidecar_path(&cfg.out))?;
    let report_slot =
        cfg.threshold.map(|_| OutputSlot::claim(&report_path(&cfg.out))).transpose()?;
    let svg_slot = cfg.svg.as_deref().map(OutputSlot::claim).transpose()?;

    let modes: &[Mode] = match cfg.mode {
        RunMode::Classical => &[Mode::Classical],
        RunMode::Quantum => &[Mode::Quantum],
        RunMode::Both => &[Mode::Classical, Mode::Quantum],
    };
    let mut legs = Vec::with_capacity(modes.len());
    for &mode in modes {
        match integrate(cfg.start, mode, cfg.ens, cfg.params, &cfg.integ) {
            Ok(t) => legs.push(t),
            Err(e) => {
                data.abandon();
                meta.abandon();
                if let Some(s) = report_slot {
                    s.abandon();
                }
                if let Some(s) = svg_slot {
                    s.abandon();
                }
                return Err(e.into());
            }
        }
    }

    let table = render_table(&legs);

    // The extinction report reads the quantum leg when one ran (it is the
    // ensemble-corrected series), otherwise the classical leg.
    let report = cfg.threshold.map(|threshold| {
        let source = legs.last().expect("at least one leg integrates");
        (detect_extinctions(source, threshold), source.mode.to_string())
    });

    let alpha = cfg.ens.map(|e| e.alpha());
    let meta_doc = serde_json::json!({
        "tool": "lvflow",
        "version": env!("CARGO_PKG_VERSION"),
        "command": "trajectory",
        "parameters": {
            "mode": match cfg.mode {
                RunMode::Classical => "classical",
                RunMode::Quantum => "quantum",
                RunMode::Both => "both",
            },
            "a": cfg.params.a(),
            "alpha": alpha,
            "x0": cfg.start.x,
            "k0": cfg.start.k,
            "t_end": cfg.integ.t_end,
            "sample_interval": cfg.integ.sample_interval,
            "rel_tol": cfg.integ.rel_tol,
            "abs_tol": cfg.integ.abs_tol,
            "max_step": cfg.integ.max_step,
            "threshold": cfg.threshold,
        },
        "schema": {
            "format": "delimited text, one header line, comma separator",
            "columns": COLUMNS,
            "row_order": "one block per mode (classical first), rows by ascending tau; \
                          blocks share the identical tau grid",
        },
        "samples_per_mode": legs.iter().map(|t| t.times.len()).collect::<Vec<_>>(),
    });

    data.commit(table.as_bytes())?;
    meta.commit(&render_json(&meta_doc)?)?;
    let mut extras = String::new();
    if let (Some(slot), Some((report, source_mode))) = (report_slot, &report) {
        let path = slot.path().to_path_buf();
        slot.commit(&render_json(&report_doc(report, source_mode))?)?;
        let _ = write!(extras, ", {} ({} windows)", path.display(), report.windows.len());
    }
    if let Some(slot) = svg_slot {
        let path = slot.path().to_path_buf();
        slot.commit(render_species_svg(&legs, cfg.params.a(), alpha).as_bytes())?;
        let _ = write!(extras, ", {}", path.display());
    }

    println!(
        "wrote {} ({} rows), {}{}",
        cfg.out.display(),
        legs.iter().map(|t| t.times.len()).sum::<usize>(),
        sidecar_path(&cfg.out).display(),
        extras
    );
    Ok(())
}
