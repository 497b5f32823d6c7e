//! Minimal static SVG emission: species time-series plots and envelope
//! maps. No interactivity, no external assets; fixed-precision pixel
//! coordinates keep the byte stream deterministic.

use std::fmt::Write as _;

/// One polyline in a line plot.
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub color: &'static str,
    pub dashed: bool,
}

/// Fixed palette for line series, cycled in order.
pub const LINE_COLORS: [&str; 4] = ["#1f6fb2", "#d1495b", "#2e8b57", "#e08214"];

/// Fill colors for classified zeros in envelope maps.
fn kind_color(kind: &str) -> &'static str {
    match kind {
        "quasi_stable_focus" => "#d1495b",
        "saddle" => "#5e3c99",
        "vortex_ccw" => "#1f6fb2",
        "vortex_cw" => "#e08214",
        _ => "#666666",
    }
}

/// Muted fills for envelope components, cycled by component id.
const REGION_COLORS: [&str; 5] = ["#9ecae9", "#b5dbb6", "#f2c893", "#d6bfe3", "#f4b6c2"];

const PLOT_W: f64 = 720.0;
const PLOT_H: f64 = 460.0;
const MARGIN_L: f64 = 64.0;
const MARGIN_R: f64 = 16.0;
const MARGIN_T: f64 = 36.0;
const MARGIN_B: f64 = 48.0;

fn px(v: f64) -> String {
    format!("{v:.2}")
}

/// Tick label: fixed-point with trailing zeros trimmed, exponent form for
/// extreme magnitudes.
fn tick_label(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let mag = v.abs();
    if !(1e-3..1e5).contains(&mag) {
        return format!("{v:.1e}");
    }
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

/// Span with a degenerate-range guard and a little headroom.
fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if !(lo.is_finite() && hi.is_finite()) {
        return (0.0, 1.0);
    }
    let span = hi - lo;
    if span <= 0.0 {
        return (lo - 1.0, hi + 1.0);
    }
    (lo - 0.05 * span, hi + 0.05 * span)
}

/// A titled line plot of one or more series.
pub fn line_plot(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let mut x_lo = f64::INFINITY;
    let mut x_hi = f64::NEG_INFINITY;
    let mut y_lo = f64::INFINITY;
    let mut y_hi = f64::NEG_INFINITY;
    for s in series {
        for &(x, y) in &s.points {
            x_lo = x_lo.min(x);
            x_hi = x_hi.max(x);
            y_lo = y_lo.min(y);
            y_hi = y_hi.max(y);
        }
    }
    let (x_lo, x_hi) = padded(x_lo, x_hi);
    let (y_lo, y_hi) = padded(y_lo, y_hi);

    let inner_w = PLOT_W - MARGIN_L - MARGIN_R;
    let inner_h = PLOT_H - MARGIN_T - MARGIN_B;
    let map_x = |x: f64| MARGIN_L + (x - x_lo) / (x_hi - x_lo) * inner_w;
    let map_y = |y: f64| MARGIN_T + inner_h - (y - y_lo) / (y_hi - y_lo) * inner_h;

    let mut out = String::new();
    let _ = write!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{PLOT_W}" height="{PLOT_H}" viewBox="0 0 {PLOT_W} {PLOT_H}" font-family="sans-serif">"#
    );
    out.push('\n');
    let _ = writeln!(out, r#"<rect width="{PLOT_W}" height="{PLOT_H}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="22" font-size="14" text-anchor="middle">{}</text>"#,
        px(PLOT_W / 2.0),
        title
    );

    // Axes box and ticks.
    let _ = writeln!(
        out,
        r##"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#333" stroke-width="1"/>"##,
        px(MARGIN_L),
        px(MARGIN_T),
        px(inner_w),
        px(inner_h)
    );
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let xv = x_lo + f * (x_hi - x_lo);
        let xp = map_x(xv);
        let _ = writeln!(
            out,
            r##"<line x1="{x}" y1="{y0}" x2="{x}" y2="{y1}" stroke="#333" stroke-width="1"/>"##,
            x = px(xp),
            y0 = px(MARGIN_T + inner_h),
            y1 = px(MARGIN_T + inner_h + 5.0)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="11" text-anchor="middle">{}</text>"#,
            px(xp),
            px(MARGIN_T + inner_h + 18.0),
            tick_label(xv)
        );
        let yv = y_lo + f * (y_hi - y_lo);
        let yp = map_y(yv);
        let _ = writeln!(
            out,
            r##"<line x1="{x0}" y1="{y}" x2="{x1}" y2="{y}" stroke="#333" stroke-width="1"/>"##,
            x0 = px(MARGIN_L - 5.0),
            x1 = px(MARGIN_L),
            y = px(yp)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="11" text-anchor="end">{}</text>"#,
            px(MARGIN_L - 8.0),
            px(yp + 4.0),
            tick_label(yv)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">{}</text>"#,
        px(MARGIN_L + inner_w / 2.0),
        px(PLOT_H - 10.0),
        x_label
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{}" font-size="12" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        px(MARGIN_T + inner_h / 2.0),
        px(MARGIN_T + inner_h / 2.0),
        y_label
    );

    // Series polylines, clipped to the axes box.
    let _ = writeln!(
        out,
        r#"<clipPath id="plot"><rect x="{}" y="{}" width="{}" height="{}"/></clipPath>"#,
        px(MARGIN_L),
        px(MARGIN_T),
        px(inner_w),
        px(inner_h)
    );
    for s in series {
        let dash = if s.dashed { r#" stroke-dasharray="6 4""# } else { "" };
        let mut pts = String::new();
        for &(x, y) in &s.points {
            if !(x.is_finite() && y.is_finite()) {
                continue;
            }
            let _ = write!(pts, "{},{} ", px(map_x(x)), px(map_y(y)));
        }
        let _ = writeln!(
            out,
            r#"<polyline clip-path="url(#plot)" points="{}" fill="none" stroke="{}" stroke-width="1.5"{}/>"#,
            pts.trim_end(),
            s.color,
            dash
        );
    }

    // Legend, top-left inside the box.
    for (i, s) in series.iter().enumerate() {
        let y = MARGIN_T + 16.0 + 16.0 * i as f64;
        let dash = if s.dashed { r#" stroke-dasharray="6 4""# } else { "" };
        let _ = writeln!(
            out,
            r#"<line x1="{x0}" y1="{y}" x2="{x1}" y2="{y}" stroke="{c}" stroke-width="1.5"{dash}/>"#,
            x0 = px(MARGIN_L + 8.0),
            x1 = px(MARGIN_L + 34.0),
            y = px(y),
            c = s.color,
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="11">{}</text>"#,
            px(MARGIN_L + 40.0),
            px(y + 4.0),
            s.label
        );
    }

    out.push_str("</svg>\n");
    out
}

/// One per-alpha panel of an envelope map.
pub struct EnvelopePanel {
    pub title: String,
    pub x_min: f64,
    pub x_max: f64,
    pub k_min: f64,
    pub k_max: f64,
    pub resolution: usize,
    /// Below-threshold grid nodes as (x index, k index, component id).
    pub nodes: Vec<(usize, usize, usize)>,
    /// Refined zeros as (x, k, kind label).
    pub zeros: Vec<(f64, f64, String)>,
}

/// Vertically stacked envelope panels, one per alpha.
pub fn envelope_map(panels: &[EnvelopePanel]) -> String {
    const SIDE: f64 = 420.0;
    const ML: f64 = 52.0;
    const MT: f64 = 30.0;
    const MB: f64 = 40.0;
    const MR: f64 = 16.0;
    let panel_h = MT + SIDE + MB;
    let total_w = ML + SIDE + MR;
    let total_h = panel_h * panels.len() as f64;

    let mut out = String::new();
    let _ = write!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total_w}" height="{total_h}" viewBox="0 0 {total_w} {total_h}" font-family="sans-serif">"#
    );
    out.push('\n');
    let _ = writeln!(out, r#"<rect width="{total_w}" height="{total_h}" fill="white"/>"#);

    for (p, panel) in panels.iter().enumerate() {
        let top = panel_h * p as f64 + MT;
        let n = panel.resolution.max(2);
        let map_x = |x: f64| ML + (x - panel.x_min) / (panel.x_max - panel.x_min) * SIDE;
        let map_k = |k: f64| top + SIDE - (k - panel.k_min) / (panel.k_max - panel.k_min) * SIDE;
        let pitch = SIDE / (n - 1) as f64;
        let cell = (pitch.ceil()).max(1.0);

        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="13" text-anchor="middle">{}</text>"#,
            px(ML + SIDE / 2.0),
            px(top - 10.0),
            panel.title
        );

        // Component node cells (drawn first, zeros on top).
        for &(i, j, comp) in &panel.nodes {
            let x = panel.x_min + (panel.x_max - panel.x_min) * i as f64 / (n - 1) as f64;
            let k = panel.k_min + (panel.k_max - panel.k_min) * j as f64 / (n - 1) as f64;
            let _ = writeln!(
                out,
                r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
                px(map_x(x) - cell / 2.0),
                px(map_k(k) - cell / 2.0),
                px(cell),
                px(cell),
                REGION_COLORS[comp % REGION_COLORS.len()]
            );
        }

        // Axes box and corner labels.
        let _ = writeln!(
            out,
            r##"<rect x="{}" y="{}" width="{SIDE}" height="{SIDE}" fill="none" stroke="#333" stroke-width="1"/>"##,
            px(ML),
            px(top)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="11" text-anchor="middle">{}</text>"#,
            px(ML),
            px(top + SIDE + 16.0),
            tick_label(panel.x_min)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="11" text-anchor="middle">{}</text>"#,
            px(ML + SIDE),
            px(top + SIDE + 16.0),
            tick_label(panel.x_max)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="11" text-anchor="end">{}</text>"#,
            px(ML - 6.0),
            px(top + SIDE),
            tick_label(panel.k_min)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="11" text-anchor="end">{}</text>"#,
            px(ML - 6.0),
            px(top + 10.0),
            tick_label(panel.k_max)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">x</text>"#,
            px(ML + SIDE / 2.0),
            px(top + SIDE + 30.0)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="12" text-anchor="end">k</text>"#,
            px(ML - 6.0),
            px(top + SIDE / 2.0)
        );

        // Classified zeros.
        for (x, k, kind) in &panel.zeros {
            let _ = writeln!(
                out,
                r#"<circle cx="{}" cy="{}" r="4" fill="{}" stroke="white" stroke-width="1"/>"#,
                px(map_x(*x)),
                px(map_k(*k)),
                kind_color(kind)
            );
        }
    }

    out.push_str("</svg>\n");
    out
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_plot_emits_one_polyline_per_series() {
        let series = [
            Series {
                label: "solid".into(),
                points: vec![(0.0, 1.0), (1.0, 2.0), (2.0, 0.5)],
                color: LINE_COLORS[0],
                dashed: false,
            },
            Series {
                label: "dashed".into(),
                points: vec![(0.0, 0.2), (1.0, 0.4), (2.0, 1.5)],
                color: LINE_COLORS[1],
                dashed: true,
            },
        ];
        let svg = line_plot("t", "x", "y", &series);
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("stroke-dasharray"), "dashed series must dash");
    }

    #[test]
    fn degenerate_ranges_do_not_divide_by_zero() {
        let series = [Series {
            label: "flat".into(),
            points: vec![(1.0, 3.0), (1.0, 3.0)],
            color: LINE_COLORS[0],
            dashed: false,
        }];
        let svg = line_plot("t", "x", "y", &series);
        assert!(!svg.contains("NaN"), "degenerate span leaked a NaN coordinate");
    }

    #[test]
    fn envelope_map_draws_nodes_and_zeros() {
        let panel = EnvelopePanel {
            title: "alpha = 0.25".into(),
            x_min: -3.0,
            x_max: 3.0,
            k_min: -3.0,
            k_max: 3.0,
            resolution: 64,
            nodes: vec![(10, 10, 0), (11, 10, 0), (40, 40, 1)],
            zeros: vec![(0.01, -0.02, "quasi_stable_focus".to_string())],
        };
        let svg = envelope_map(&[panel]);
        // Three node cells plus one axes box.
        assert_eq!(svg.matches("<rect").count(), 3 + 1 + 1, "nodes + frame + background");
        assert_eq!(svg.matches("<circle").count(), 1);
    }

    #[test]
    fn tick_labels_stay_compact() {
        assert_eq!(tick_label(0.0), "0");
        assert_eq!(tick_label(2.5), "2.5");
        assert_eq!(tick_label(-3.0), "-3");
        assert_eq!(tick_label(1.0e-7), "1.0e-7");
    }
}
