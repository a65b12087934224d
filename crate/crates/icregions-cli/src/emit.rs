//! Output emitters. Every format is deterministic: identical inputs produce
//! byte-identical text, so repeated invocations diff clean.
//!
//! * JSON — one object per command, serialized from order-stable structs.
//! * CSV — a header row plus data rows in a fixed column order.
//! * SVG — a minimal static polygon plot: axes, the region, and an optional
//!   dashed reference line `R1 + R2 = s`.

use std::fs;
use std::path::Path;

use clap::ValueEnum;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

/// Write `content` to the given path, or to stdout when no path is set.
/// Stdout is flushed explicitly because the process exits without running
/// buffered-writer destructors.
pub fn write_output(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, content).map_err(|e| {
            CliError::validation(format!("cannot write output file `{}`: {e}", p.display()))
        }),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout();
            match out.write_all(content.as_bytes()).and_then(|()| out.flush()) {
                Ok(()) => Ok(()),
                // A closed pipe (e.g. `| head`) is not an error.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                Err(e) => Err(CliError::validation(format!("cannot write to stdout: {e}"))),
            }
        }
    }
}

/// Serialize any order-stable structure as a single JSON line.
pub fn json_line<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string(value)?;
    s.push('\n');
    Ok(s)
}

/// Assemble a CSV document from a header and rows of preformatted cells.
pub fn csv_doc(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

const WIDTH: f64 = 480.0;
const HEIGHT: f64 = 360.0;
const MARGIN_LEFT: f64 = 56.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 28.0;
const MARGIN_BOTTOM: f64 = 48.0;

/// Render the polygon with axes and an optional dashed `R1 + R2 = s` line.
pub fn region_svg(title: &str, vertices: &[(f64, f64)], ref_sum: Option<f64>) -> String {
    let mut max_x = vertices.iter().map(|v| v.0).fold(0.0, f64::max);
    let mut max_y = vertices.iter().map(|v| v.1).fold(0.0, f64::max);
    if let Some(s) = ref_sum {
        max_x = max_x.max(s);
        max_y = max_y.max(s);
    }
    if max_x <= 0.0 {
        max_x = 1.0;
    }
    if max_y <= 0.0 {
        max_y = 1.0;
    }
    max_x *= 1.08;
    max_y *= 1.08;

    let x0 = MARGIN_LEFT;
    let y0 = HEIGHT - MARGIN_BOTTOM;
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let px = |x: f64| x0 + x / max_x * plot_w;
    let py = |y: f64| y0 - y / max_y * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH:.0} {HEIGHT:.0}\" \
         width=\"{WIDTH:.0}\" height=\"{HEIGHT:.0}\">\n"
    ));
    svg.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{WIDTH:.0}\" height=\"{HEIGHT:.0}\" fill=\"#ffffff\"/>\n"
    ));
    svg.push_str(&format!(
        "  <text x=\"{:.4}\" y=\"{:.4}\" font-family=\"sans-serif\" font-size=\"13\" \
         text-anchor=\"middle\">{}</text>\n",
        x0 + plot_w / 2.0,
        MARGIN_TOP - 10.0,
        xml_escape(title)
    ));

    if !vertices.is_empty() {
        let points: Vec<String> = vertices
            .iter()
            .map(|&(x, y)| format!("{:.4},{:.4}", px(x), py(y)))
            .collect();
        svg.push_str(&format!(
            "  <polygon points=\"{}\" fill=\"#4477aa\" fill-opacity=\"0.35\" \
             stroke=\"#4477aa\" stroke-width=\"1.5\"/>\n",
            points.join(" ")
        ));
    }

    if let Some(s) = ref_sum {
        svg.push_str(&format!(
            "  <line x1=\"{:.4}\" y1=\"{:.4}\" x2=\"{:.4}\" y2=\"{:.4}\" stroke=\"#cc3311\" \
             stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>\n",
            px(s),
            py(0.0),
            px(0.0),
            py(s)
        ));
        svg.push_str(&format!(
            "  <text x=\"{:.4}\" y=\"{:.4}\" font-family=\"sans-serif\" font-size=\"11\" \
             fill=\"#cc3311\">R1+R2 = {s}</text>\n",
            px(s / 2.0) + 6.0,
            py(s / 2.0) - 6.0
        ));
    }

    // Axes last so they stay visible over the fill.
    svg.push_str(&format!(
        "  <line x1=\"{x0:.4}\" y1=\"{y0:.4}\" x2=\"{:.4}\" y2=\"{y0:.4}\" \
         stroke=\"#333333\" stroke-width=\"1\"/>\n",
        x0 + plot_w
    ));
    svg.push_str(&format!(
        "  <line x1=\"{x0:.4}\" y1=\"{y0:.4}\" x2=\"{x0:.4}\" y2=\"{:.4}\" \
         stroke=\"#333333\" stroke-width=\"1\"/>\n",
        y0 - plot_h
    ));
    svg.push_str(&format!(
        "  <text x=\"{:.4}\" y=\"{:.4}\" font-family=\"sans-serif\" font-size=\"12\" \
         text-anchor=\"middle\">R1</text>\n",
        x0 + plot_w / 2.0,
        y0 + 34.0
    ));
    svg.push_str(&format!(
        "  <text x=\"{:.4}\" y=\"{:.4}\" font-family=\"sans-serif\" font-size=\"12\" \
         text-anchor=\"middle\" transform=\"rotate(-90 {:.4} {:.4})\">R2</text>\n",
        x0 - 38.0,
        y0 - plot_h / 2.0,
        x0 - 38.0,
        y0 - plot_h / 2.0
    ));
    for (value, axis) in [(max_x / 1.08, 'x'), (max_y / 1.08, 'y')] {
        let (tx, ty, anchor) = if axis == 'x' {
            (px(value), y0 + 16.0, "middle")
        } else {
            (x0 - 6.0, py(value) + 4.0, "end")
        };
        svg.push_str(&format!(
            "  <text x=\"{tx:.4}\" y=\"{ty:.4}\" font-family=\"sans-serif\" font-size=\"10\" \
             text-anchor=\"{anchor}\">{value:.3}</text>\n"
        ));
    }
    svg.push_str(&format!(
        "  <text x=\"{:.4}\" y=\"{:.4}\" font-family=\"sans-serif\" font-size=\"10\" \
         text-anchor=\"end\">0</text>\n",
        x0 - 6.0,
        y0 + 14.0
    ));
    svg.push_str("</svg>\n");
    svg
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
