// SPDX-License-Identifier: Apache-2.0

//! CSV, JSON and SVG writers with deterministic formatting.

use crate::error::CliResult;
use serde::Serialize;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

/// Scientific notation with 17 significant digits.
pub fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn sci_opt(x: Option<f64>) -> String {
    x.map(sci).unwrap_or_default()
}

pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_csv(&self) -> CliResult<String> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Output directory plus the experiment stem.
#[derive(Clone, Debug)]
pub struct Sink {
    pub dir: PathBuf,
    pub stem: String,
}

impl Sink {
    pub fn new(dir: &Path, stem: &str) -> CliResult<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            stem: stem.to_string(),
        })
    }

    pub fn path(&self, suffix: &str) -> PathBuf {
        self.dir.join(format!("{}{suffix}", self.stem))
    }

    pub fn csv(&self, suffix: &str, table: &Table) -> CliResult<PathBuf> {
        let p = self.path(suffix);
        fs::write(&p, table.to_csv()?)?;
        Ok(p)
    }

    pub fn json(&self, suffix: &str, value: &impl Serialize) -> CliResult<PathBuf> {
        let p = self.path(suffix);
        fs::write(&p, serde_json::to_string_pretty(value)? + "\n")?;
        Ok(p)
    }

    pub fn text(&self, suffix: &str, body: &str) -> CliResult<PathBuf> {
        let p = self.path(suffix);
        fs::write(&p, body)?;
        Ok(p)
    }
}

/// One polyline or point set of a plot.
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    /// Draw markers only.
    pub scatter: bool,
}

pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub series: Vec<Series>,
}

const PALETTE: [&str; 6] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"];

impl Plot {
    /// Standalone SVG; the plotted data is repeated in a leading comment.
    pub fn to_svg(&self) -> String {
        let (w, h, m) = (640.0, 420.0, 60.0);
        let tx = |v: f64| if self.log_x { v.log10() } else { v };
        let ty = |v: f64| if self.log_y { v.log10() } else { v };
        let usable = |x: f64, y: f64| (!self.log_x || x > 0.0) && (!self.log_y || y > 0.0);
        let pts: Vec<(f64, f64)> = self
            .series
            .iter()
            .flat_map(|s| s.points.iter().copied())
            .filter(|&(x, y)| usable(x, y) && x.is_finite() && y.is_finite())
            .map(|(x, y)| (tx(x), ty(y)))
            .collect();
        let bound = |f: fn(&(f64, f64)) -> f64| {
            let lo = pts.iter().map(f).fold(f64::INFINITY, f64::min);
            let hi = pts.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
            if !lo.is_finite() {
                (0.0, 1.0)
            } else if hi - lo < 1e-300 {
                (lo - 0.5, hi + 0.5)
            } else {
                (lo, hi)
            }
        };
        let (x0, x1) = bound(|p| p.0);
        let (y0, y1) = bound(|p| p.1);
        let px = |x: f64| m + (x - x0) / (x1 - x0) * (w - 2.0 * m);
        let py = |y: f64| h - m - (y - y0) / (y1 - y0) * (h - 2.0 * m);

        let mut out = String::new();
        out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<!--\n");
        for s in &self.series {
            let _ = writeln!(out, "series: {}", s.label.replace("--", "-"));
            for (x, y) in &s.points {
                let _ = writeln!(out, "{},{}", sci(*x), sci(*y));
            }
        }
        out.push_str("-->\n");
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
        );
        let _ = writeln!(out, "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>");
        let _ = writeln!(
            out,
            "<rect x=\"{m}\" y=\"{m}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
            w - 2.0 * m,
            h - 2.0 * m
        );
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"14\">{}</text>",
            w / 2.0,
            m / 2.0,
            escape(&self.title)
        );
        let axis = |log: bool, label: &str| if log { format!("log10 {label}") } else { label.to_string() };
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"12\">{}</text>",
            w / 2.0,
            h - 15.0,
            escape(&axis(self.log_x, &self.x_label))
        );
        let _ = writeln!(
            out,
            "<text x=\"15\" y=\"{}\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 15 {})\">{}</text>",
            h / 2.0,
            h / 2.0,
            escape(&axis(self.log_y, &self.y_label))
        );
        for (value, anchor_x) in [(x0, m), (x1, w - m)] {
            let _ = writeln!(
                out,
                "<text x=\"{anchor_x}\" y=\"{}\" text-anchor=\"middle\" font-size=\"10\">{value:.3}</text>",
                h - m + 14.0
            );
        }
        for (value, anchor_y) in [(y0, h - m), (y1, m)] {
            let _ = writeln!(
                out,
                "<text x=\"{}\" y=\"{anchor_y}\" text-anchor=\"end\" font-size=\"10\">{value:.3}</text>",
                m - 4.0
            );
        }
        for (k, s) in self.series.iter().enumerate() {
            let color = PALETTE[k % PALETTE.len()];
            let coords: Vec<(f64, f64)> = s
                .points
                .iter()
                .filter(|&&(x, y)| usable(x, y))
                .map(|&(x, y)| (px(tx(x)), py(ty(y))))
                .collect();
            if s.scatter {
                for (x, y) in &coords {
                    let _ = writeln!(out, "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"1.2\" fill=\"{color}\"/>");
                }
            } else if !coords.is_empty() {
                let path: Vec<String> = coords.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
                let _ = writeln!(
                    out,
                    "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>",
                    path.join(" ")
                );
            }
            let _ = writeln!(
                out,
                "<text x=\"{}\" y=\"{}\" font-size=\"11\" fill=\"{color}\">{}</text>",
                w - m + 5.0 - 120.0,
                m + 16.0 * (k as f64 + 1.0),
                escape(&s.label)
            );
        }
        out.push_str("</svg>\n");
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
