//! `flow-field`: evaluate every field quantity over a phase-space grid
//! and emit one delimited-text record per node.

use std::fmt::Write as _;

use lvflow::wigner_flow::{grid_scan, GridSpec};

use crate::config::FlowFieldRun;
use crate::error::CliError;
use crate::output::{fmt_float, render_json, sidecar_path, OutputSlot};

/// Stable column order; documented in the sidecar and README.
pub const COLUMNS: [&str; 10] =
    ["x", "k", "G", "wx", "wk", "divJx", "divJk", "divJ", "divw", "divw_defined"];

pub fn run(cfg: &FlowFieldRun) -> Result<(), CliError> {
    // Claim both outputs before computing: an unwritable path must fail
    // before any grid time is spent.
    let data = OutputSlot::claim(&cfg.out)?;
    let meta = OutputSlot::claim(&sidecar_path(&cfg.out))?;

    let spec = GridSpec::centered(cfg.range, cfg.resolution);
    let samples = grid_scan(spec, cfg.ens, cfg.params);

    let mut table = String::with_capacity(samples.len() * 96 + 128);
    table.push_str(&COLUMNS.join(","));
    table.push('\n');
    for s in &samples {
        let _ = writeln!(
            table,
            "{},{},{},{},{},{},{},{},{},{}",
            fmt_float(s.point.x),
            fmt_float(s.point.k),
            fmt_float(s.density),
            fmt_float(s.w.vx),
            fmt_float(s.w.vk),
            fmt_float(s.div_jx),
            fmt_float(s.div_jk),
            fmt_float(s.div_j),
            fmt_float(s.div_w),
            s.divw_defined,
        );
    }

    let meta_doc = serde_json::json!({
        "tool": "lvflow",
        "version": env!("CARGO_PKG_VERSION"),
        "command": "flow-field",
        "parameters": {
            "alpha": cfg.ens.alpha(),
            "a": cfg.params.a(),
            "range": cfg.range,
            "resolution": cfg.resolution,
        },
        "schema": {
            "format": "delimited text, one header line, comma separator",
            "columns": COLUMNS,
            "node_order": "row-major over the square grid, x varying fastest, both axes ascending",
            "notes": "divw is NaN exactly where divw_defined is false (density below the deep-tail floor)",
        },
        "records": samples.len(),
    });

    data.commit(table.as_bytes())?;
    meta.commit(&render_json(&meta_doc)?)?;
    println!(
        "wrote {} ({} records) and {}",
        cfg.out.display(),
        samples.len(),
        sidecar_path(&cfg.out).display()
    );
    Ok(())
}
