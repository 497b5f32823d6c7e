//! `equilibria`: sweep spreading parameters, scan each corrected velocity
//! field for slow-speed envelopes, refine and classify every zero, and
//! emit the census as one structured document.

use lvflow::critical_points::{alpha_sweep, scan_envelope, AlphaSummary, CriticalPoint};
use lvflow::wigner_flow::GaussianEnsemble;

use crate::config::EquilibriaRun;
use crate::error::CliError;
use crate::output::{render_json, sidecar_path, OutputSlot};
use crate::svg::{envelope_map, EnvelopePanel};

fn zero_row(z: &CriticalPoint) -> serde_json::Value {
    let (e1, e2) = z.jacobian_eigs;
    serde_json::json!({
        "x": z.location.x,
        "k": z.location.k,
        "kind": z.kind.to_string(),
        "winding": z.winding,
        // Dominant Jacobian eigenvalue magnitudes (max over the pair).
        "eig_re_abs": e1.re.abs().max(e2.re.abs()),
        "eig_im_abs": e1.im.abs().max(e2.im.abs()),
        "speed": z.speed,
    })
}

fn census_entry(summary: &AlphaSummary) -> serde_json::Value {
    serde_json::json!({
        "alpha": summary.alpha,
        "n_components": summary.n_components,
        "n_zeros": summary.zeros.len(),
        "zeros": summary.zeros.iter().map(zero_row).collect::<Vec<_>>(),
        "displacement_of_dominant_zero": if summary.dominant_displacement.is_nan() {
            None
        } else {
            Some(summary.dominant_displacement)
        },
    })
}

fn svg_panels(cfg: &EquilibriaRun, summaries: &[&AlphaSummary]) -> String {
    let panels: Vec<EnvelopePanel> = summaries
        .iter()
        .map(|s| {
            // The sweep reports component counts; the map also needs the
            // member nodes, so re-scan this alpha's envelope.
            let ens = GaussianEnsemble::new(s.alpha).expect("swept alpha already validated");
            let regions = scan_envelope(&cfg.scan, ens, cfg.params);
            let nodes = regions
                .iter()
                .flat_map(|r| {
                    r.member_nodes.iter().map(move |&(i, j)| (i, j, r.component_id))
                })
                .collect();
            EnvelopePanel {
                title: format!(
                    "alpha = {} - {} component(s), {} zero(s)",
                    s.alpha,
                    s.n_components,
                    s.zeros.len()
                ),
                x_min: cfg.scan.x_min,
                x_max: cfg.scan.x_max,
                k_min: cfg.scan.k_min,
                k_max: cfg.scan.k_max,
                resolution: cfg.scan.resolution,
                nodes,
                zeros: s
                    .zeros
                    .iter()
                    .map(|z| (z.location.x, z.location.k, z.kind.to_string()))
                    .collect(),
            }
        })
        .collect();
    envelope_map(&panels)
}

pub fn run(cfg: &EquilibriaRun) -> Result<(), CliError> {
    let data = OutputSlot::claim(&cfg.out)?;
    let meta = OutputSlot::claim(&sidecar_path(&cfg.out))?;
    let svg_slot = cfg.svg.as_deref().map(OutputSlot::claim).transpose()?;

    let results = alpha_sweep(&cfg.alphas, &cfg.scan, cfg.params);

    let mut entries = Vec::new();
    let mut failures = Vec::new();
    let mut summaries = Vec::new();
    for (alpha, result) in cfg.alphas.iter().zip(&results) {
        match result {
            Ok(summary) => {
                entries.push(census_entry(summary));
                summaries.push(summary);
            }
            Err(e) => failures.push(serde_json::json!({
                "alpha": alpha,
                "error": e.to_string(),
            })),
        }
    }

    let doc = serde_json::json!({
        "a": cfg.params.a(),
        "range": cfg.scan.x_max,
        "resolution": cfg.scan.resolution,
        "speed_threshold": cfg.scan.speed_threshold,
        "entries": entries,
        "failures": failures,
    });

    let meta_doc = serde_json::json!({
        "tool": "lvflow",
        "version": env!("CARGO_PKG_VERSION"),
        "command": "equilibria",
        "parameters": {
            "alphas": cfg.alphas,
            "a": cfg.params.a(),
            "range": cfg.scan.x_max,
            "resolution": cfg.scan.resolution,
            "speed_threshold": cfg.scan.speed_threshold,
        },
        "notes": "zeros are Newton-refined below the scan grid's pitch and classified by \
                  Jacobian signature cross-checked against the winding number; \
                  eig_re_abs/eig_im_abs are the max magnitudes over the eigenvalue pair",
    });

    data.commit(&render_json(&doc)?)?;
    meta.commit(&render_json(&meta_doc)?)?;
    if let Some(slot) = svg_slot {
        let path = slot.path().to_path_buf();
        slot.commit(svg_panels(cfg, &summaries).as_bytes())?;
        println!("wrote envelope map {}", path.display());
    }

    for summary in &summaries {
        println!(
            "alpha {}: {} component(s), {} zero(s), dominant displacement {}",
            summary.alpha,
            summary.n_components,
            summary.zeros.len(),
            if summary.dominant_displacement.is_nan() {
                "n/a".to_string()
            } else {
                format!("{:.6}", summary.dominant_displacement)
            }
        );
    }
    for failure in &failures {
        eprintln!("alpha {} failed: {}", failure["alpha"], failure["error"]);
    }
    println!(
        "wrote {} ({} entries, {} failures) and {}",
        cfg.out.display(),
        entries.len(),
        failures.len(),
        sidecar_path(&cfg.out).display()
    );
    Ok(())
}
