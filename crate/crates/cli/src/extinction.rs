//! `extinction`: integrate one orbit and report every window where a
//! species density stays below the extinction bar, plus the revival
//! durations between windows.

use lvflow::dynamics::{detect_extinctions, integrate, ExtinctionReport, Mode, SpeciesTag};

use crate::args::RunMode;
use crate::config::ExtinctionRun;
use crate::error::CliError;
use crate::output::{render_json, sidecar_path, OutputSlot};

/// Render an extinction report as the structured document shared by the
/// `extinction` command and `trajectory --threshold`.
pub(crate) fn report_doc(report: &ExtinctionReport, source_mode: &str) -> serde_json::Value {
    let windows: Vec<serde_json::Value> = report
        .windows
        .iter()
        .map(|w| {
            serde_json::json!({
                "species": w.species.to_string(),
                "t_start": w.t_start,
                "t_end": w.t_end,
                "duration": w.duration(),
            })
        })
        .collect();
    serde_json::json!({
        "threshold": report.threshold,
        "source_mode": source_mode,
        "windows": windows,
        // Gaps in the merged (both-species) window list, in order.
        "revival_durations": report.revival_durations,
        "revival_durations_by_species": {
            "prey": report.revival_durations_for(SpeciesTag::Prey),
            "predator": report.revival_durations_for(SpeciesTag::Predator),
        },
    })
}

pub fn run(cfg: &ExtinctionRun) -> Result<(), CliError> {
    let data = OutputSlot::claim(&cfg.out)?;
    let meta = OutputSlot::claim(&sidecar_path(&cfg.out))?;

    let mode = match cfg.mode {
        RunMode::Classical => Mode::Classical,
        _ => Mode::Quantum,
    };
    let traj = match integrate(cfg.start, mode, cfg.ens, cfg.params, &cfg.integ) {
        Ok(t) => t,
        Err(e) => {
            data.abandon();
            meta.abandon();
            return Err(e.into());
        }
    };
    let report = detect_extinctions(&traj, cfg.threshold);
    let doc = report_doc(&report, &mode.to_string());

    let meta_doc = serde_json::json!({
        "tool": "lvflow",
        "version": env!("CARGO_PKG_VERSION"),
        "command": "extinction",
        "parameters": {
            "mode": mode.to_string(),
            "a": cfg.params.a(),
            "alpha": cfg.ens.map(|e| e.alpha()),
            "x0": cfg.start.x,
            "k0": cfg.start.k,
            "t_end": cfg.integ.t_end,
            "sample_interval": cfg.integ.sample_interval,
            "rel_tol": cfg.integ.rel_tol,
            "abs_tol": cfg.integ.abs_tol,
            "max_step": cfg.integ.max_step,
            "threshold": cfg.threshold,
        },
        "notes": "window boundaries are linearly interpolated between samples; \
                  a window still open at the final sample is closed there",
        "samples": traj.times.len(),
    });

    data.commit(&render_json(&doc)?)?;
    meta.commit(&render_json(&meta_doc)?)?;
    println!(
        "wrote {} ({} windows, {} revivals) and {}",
        cfg.out.display(),
        report.windows.len(),
        report.revival_durations.len(),
        sidecar_path(&cfg.out).display()
    );
    Ok(())
}
