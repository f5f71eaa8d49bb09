//! CSV tables and SVG line plots for experiment results.

use crate::experiments::{Curve, ExperimentResult};
use anyhow::{Context, Result};
use std::fmt::Write as _;
use std::path::Path;

/// Render the aggregate table. Floats use the shortest decimal form that
/// parses back to the identical bits. Multi-curve results separate the
/// blocks with `# curve <label>` comment lines; a single curve is emitted
/// bare, so a one-row result is exactly two lines.
pub fn format_csv(result: &ExperimentResult) -> String {
    let mut out = String::from("sweep,median,q1,q3,n_feasible,n_infeasible\n");
    for curve in &result.curves {
        if result.curves.len() > 1 {
            let _ = writeln!(out, "# curve {}", curve.label);
        }
        for row in &curve.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                row.sweep, row.median, row.q1, row.q3, row.n_feasible, row.n_infeasible
            );
        }
    }
    out
}

pub fn emit_csv(result: &ExperimentResult, path: &Path) -> Result<()> {
    std::fs::write(path, format_csv(result))
        .with_context(|| format!("writing CSV to {}", path.display()))
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 160.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 50.0;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn coord(&self, value: f64, pixel_lo: f64, pixel_hi: f64) -> f64 {
        let map = |v: f64| if self.log { v.log2() } else { v };
        let (lo, hi) = (map(self.lo), map(self.hi));
        let t = if hi > lo {
            (map(value) - lo) / (hi - lo)
        } else {
            0.5
        };
        pixel_lo + t * (pixel_hi - pixel_lo)
    }
}

fn finite_rows(curve: &Curve) -> impl Iterator<Item = &crate::experiments::SweepRow> {
    curve.rows.iter().filter(|r| r.median.is_finite())
}

/// Line plot with a shaded interquartile band per curve. The x axis is
/// log-scaled when the sweep variable is a shot count.
pub fn format_svg(result: &ExperimentResult) -> String {
    let xs: Vec<f64> = result
        .curves
        .iter()
        .flat_map(|c| finite_rows(c).map(|r| r.sweep))
        .collect();
    let ys: Vec<f64> = result
        .curves
        .iter()
        .flat_map(|c| finite_rows(c).flat_map(|r| [r.q1, r.q3]))
        .collect();
    let x_axis = Axis {
        lo: xs.iter().copied().fold(f64::INFINITY, f64::min),
        hi: xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        log: result.log_x,
    };
    let y_lo = ys.iter().copied().fold(f64::INFINITY, f64::min);
    let y_hi = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let pad = 0.05 * (y_hi - y_lo).max(1e-9);
    let y_axis = Axis {
        lo: y_lo - pad,
        hi: y_hi + pad,
        log: false,
    };

    let x_px = |v: f64| x_axis.coord(v, MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
    let y_px = |v: f64| y_axis.coord(v, HEIGHT - MARGIN_BOTTOM, MARGIN_TOP);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" \
         font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(
        svg,
        "<rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
    );
    // frame
    let _ = writeln!(
        svg,
        "<rect x=\"{MARGIN_LEFT}\" y=\"{MARGIN_TOP}\" width=\"{}\" height=\"{}\" \
         fill=\"none\" stroke=\"#444\"/>",
        WIDTH - MARGIN_LEFT - MARGIN_RIGHT,
        HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    );
    // axis labels
    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}{}</text>",
        (MARGIN_LEFT + WIDTH - MARGIN_RIGHT) / 2.0,
        HEIGHT - 12.0,
        result.sweep_label,
        if result.log_x { " (log scale)" } else { "" }
    );
    let _ = writeln!(
        svg,
        "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">certified bound</text>",
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    // y ticks
    for i in 0..=4 {
        let v = y_axis.lo + (y_axis.hi - y_axis.lo) * i as f64 / 4.0;
        let y = y_px(v);
        let _ = writeln!(
            svg,
            "<line x1=\"{}\" y1=\"{y}\" x2=\"{MARGIN_LEFT}\" y2=\"{y}\" stroke=\"#444\"/>",
            MARGIN_LEFT - 4.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{v:.3}</text>",
            MARGIN_LEFT - 8.0,
            y + 4.0
        );
    }
    // x ticks at the sweep values of the longest curve
    if let Some(longest) = result.curves.iter().max_by_key(|c| c.rows.len()) {
        for row in longest.rows.iter() {
            let x = x_px(row.sweep);
            let _ = writeln!(
                svg,
                "<line x1=\"{x}\" y1=\"{}\" x2=\"{x}\" y2=\"{}\" stroke=\"#444\"/>",
                HEIGHT - MARGIN_BOTTOM,
                HEIGHT - MARGIN_BOTTOM + 4.0
            );
            let _ = writeln!(
                svg,
                "<text x=\"{x}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
                HEIGHT - MARGIN_BOTTOM + 18.0,
                row.sweep
            );
        }
    }

    for (index, curve) in result.curves.iter().enumerate() {
        let color = PALETTE[index % PALETTE.len()];
        let points: Vec<(f64, f64, f64, f64)> = finite_rows(curve)
            .map(|r| (x_px(r.sweep), y_px(r.median), y_px(r.q1), y_px(r.q3)))
            .collect();
        if points.is_empty() {
            continue;
        }
        // interquartile band: upper edge forward, lower edge back
        let mut band = String::from("M");
        for (x, _, _, q3) in &points {
            let _ = write!(band, " {x:.2},{q3:.2}");
        }
        for (x, _, q1, _) in points.iter().rev() {
            let _ = write!(band, " {x:.2},{q1:.2}");
        }
        band.push_str(" Z");
        let _ = writeln!(
            svg,
            "<path class=\"band\" d=\"{band}\" fill=\"{color}\" opacity=\"0.2\" stroke=\"none\"/>"
        );
        let mut line = String::from("M");
        for (x, y, _, _) in &points {
            let _ = write!(line, " {x:.2},{y:.2}");
        }
        let _ = writeln!(
            svg,
            "<path class=\"median\" d=\"{line}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\"/>"
        );
        let legend_y = MARGIN_TOP + 16.0 * index as f64 + 10.0;
        let _ = writeln!(
            svg,
            "<rect x=\"{}\" y=\"{}\" width=\"10\" height=\"10\" fill=\"{color}\"/>",
            WIDTH - MARGIN_RIGHT + 10.0,
            legend_y - 9.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{legend_y}\">{}</text>",
            WIDTH - MARGIN_RIGHT + 26.0,
            curve.label
        );
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn emit_svg(result: &ExperimentResult, path: &Path) -> Result<()> {
    std::fs::write(path, format_svg(result))
        .with_context(|| format!("writing SVG to {}", path.display()))
}
