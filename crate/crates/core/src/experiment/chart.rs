//! Dependency-free SVG line charts of trajectories.

use std::fmt::Write as _;
use std::path::Path;

use crate::trajectory::{TrajectoryRow, COLUMNS};

/// Stroke colors for p, v1, v2, s1, s2, s3.
pub const SERIES_COLORS: [&str; 6] = ["red", "green", "blue", "yellow", "turquoise", "magenta"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartSpec {
    pub width: u32,
    pub height: u32,
    pub tau_range: (f64, f64),
    pub y_range: (f64, f64),
}

impl Default for ChartSpec {
    fn default() -> Self {
        Self {
            width: 720,
            height: 440,
            tau_range: (0.0, 2.0),
            y_range: (0.0, 1.0),
        }
    }
}

/// One set of six series; dashed layers are drawn thinner.
#[derive(Debug, Clone, Copy)]
pub struct Layer<'a> {
    pub label: &'a str,
    pub rows: &'a [TrajectoryRow],
    pub dashed: bool,
}

const MARGIN: f64 = 48.0;

pub fn render_svg(layers: &[Layer<'_>], spec: &ChartSpec) -> String {
    let (w, h) = (spec.width as f64, spec.height as f64);
    let (x0, x1) = spec.tau_range;
    let (y0, y1) = spec.y_range;
    let px = |tau: f64| MARGIN + (tau.clamp(x0, x1) - x0) / (x1 - x0) * (w - 2.0 * MARGIN);
    let py = |y: f64| h - MARGIN - (y.clamp(y0, y1) - y0) / (y1 - y0) * (h - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        spec.width, spec.height, spec.width, spec.height
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<g stroke="black" stroke-width="1" fill="none"><path d="M{:.2} {:.2}H{:.2}M{:.2} {:.2}V{:.2}"/></g>"#,
        px(x0),
        py(y0),
        px(x1),
        px(x0),
        py(y0),
        py(y1)
    );
    let _ = writeln!(s, r#"<g font-family="sans-serif" font-size="11" fill="black">"#);
    for i in 0..=4 {
        let tau = x0 + (x1 - x0) * i as f64 / 4.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{:.2}</text>"#,
            px(tau),
            py(y0) + 16.0,
            tau
        );
        let y = y0 + (y1 - y0) * i as f64 / 4.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{:.2}</text>"#,
            px(x0) - 6.0,
            py(y) + 4.0,
            y
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">tau</text>"#,
        w / 2.0,
        h - 8.0
    );
    for (i, (name, color)) in COLUMNS.iter().zip(SERIES_COLORS).enumerate() {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" fill="{color}">{name}</text>"#,
            w - MARGIN + 8.0,
            MARGIN + 14.0 * i as f64
        );
    }
    for (j, layer) in layers.iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}">{}{}</text>"#,
            MARGIN + 8.0,
            MARGIN - 20.0 + 14.0 * j as f64,
            escape(layer.label),
            if layer.dashed { " (dashed)" } else { "" }
        );
    }
    let _ = writeln!(s, "</g>");

    for layer in layers {
        let dash = if layer.dashed {
            r#" stroke-dasharray="6 4""#
        } else {
            ""
        };
        let width = if layer.dashed { 1.0 } else { 1.5 };
        for (col, color) in SERIES_COLORS.iter().enumerate() {
            let points: Vec<String> = layer
                .rows
                .iter()
                .map(|r| format!("{:.2},{:.2}", px(r.tau), py(r.values()[col])))
                .collect();
            let _ = writeln!(
                s,
                r#"<polyline fill="none" stroke="{color}" stroke-width="{width}"{dash} points="{}"/>"#,
                points.join(" ")
            );
            if let [r] = layer.rows {
                let _ = writeln!(
                    s,
                    r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#,
                    px(r.tau),
                    py(r.values()[col])
                );
            }
        }
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn emit_chart(layers: &[Layer<'_>], spec: &ChartSpec, path: &Path) -> std::io::Result<()> {
    std::fs::write(path, render_svg(layers, spec))
}
