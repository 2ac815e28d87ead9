//! CSV schemas, SVG figures and the writer that puts them on disk.
//!
//! Every experiment collects its files in an [`Emitter`] and writes them
//! once at the end. CSV floats use the shortest representation that parses
//! back to the same value, so every schema round-trips exactly.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use paraconvex_core::Point;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub scene: String,
    pub r: f64,
    pub alpha_hat: f64,
    pub witness_cx: Option<f64>,
    pub witness_cy: Option<f64>,
    pub witness_qx: Option<f64>,
    pub witness_qy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleRow {
    pub scene: String,
    pub r: f64,
    pub alpha_hat: f64,
    pub oracle: f64,
    pub grid_step: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsRow {
    pub alpha: f64,
    pub phi: f64,
    pub banach_bound: f64,
    pub hilbert_bound: f64,
    pub threshold_root: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaRow {
    pub gamma: f64,
    pub n: usize,
    pub gamma_n: f64,
    pub fixed_point: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetractionRow {
    pub scene: String,
    pub x: f64,
    pub y: f64,
    pub rx: f64,
    pub ry: f64,
    pub dist_to_set: f64,
    pub displacement: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformityCsvRow {
    pub scene: String,
    pub eps: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceRow {
    pub scene: String,
    pub sample: usize,
    /// Ensemble indices joined by `;`.
    pub members: String,
    pub r: f64,
    pub beta: f64,
    pub sup_distance: f64,
    pub bound: f64,
    pub max_spread: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModulusCsvRow {
    pub scene: String,
    pub grid: String,
    pub step: usize,
    pub t: f64,
    pub delta: f64,
    pub sup_dist: f64,
    pub ratio: f64,
    pub prior_displacement: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProximityRow {
    pub configurations: usize,
    pub near_center: usize,
    pub near_boundary: usize,
    pub violations: usize,
    pub worst_excess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaRow {
    pub draw: usize,
    pub k: usize,
    pub zx: f64,
    pub zy: f64,
    pub dist_to_set: f64,
    pub hull_in_set: bool,
    pub euclidean_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionRow {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

pub fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner()
        .map_err(|e| CliError::Input(format!("csv buffer: {e}")))
}

pub fn parse_csv<T: DeserializeOwned>(bytes: &[u8]) -> Result<Vec<T>, CliError> {
    let mut r = csv::Reader::from_reader(bytes);
    r.deserialize()
        .collect::<Result<Vec<T>, _>>()
        .map_err(CliError::from)
}

pub fn read_csv<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, CliError> {
    let bytes =
        std::fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_csv(&bytes)
}

/// Files of one experiment, written together by [`Emitter::write`].
#[derive(Debug, Default)]
pub struct Emitter {
    files: Vec<(String, Vec<u8>)>,
}

impl Emitter {
    pub fn csv<T: Serialize>(&mut self, name: &str, rows: &[T]) -> Result<(), CliError> {
        let bytes = csv_bytes(rows)?;
        self.files.push((name.into(), bytes));
        Ok(())
    }

    pub fn text(&mut self, name: &str, body: String) {
        self.files.push((name.into(), body.into_bytes()));
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.files.iter().map(|f| f.0.as_str())
    }

    pub fn get(&self, name: &str) -> Option<&[u8]> {
        self.files
            .iter()
            .find(|f| f.0 == name)
            .map(|f| f.1.as_slice())
    }

    pub fn extend(&mut self, other: Emitter) {
        self.files.extend(other.files);
    }

    /// Creates `dir` if needed and writes every file into it.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::output(dir, e))?;
        let mut out = Vec::with_capacity(self.files.len());
        for (name, bytes) in &self.files {
            let path = dir.join(name);
            std::fs::write(&path, bytes).map_err(|e| CliError::output(&path, e))?;
            out.push(path);
        }
        Ok(out)
    }
}

/// Maps data coordinates into a square SVG canvas with a margin.
struct Frame {
    lo: (f64, f64),
    scale: (f64, f64),
    size: f64,
    margin: f64,
}

impl Frame {
    fn new(lo: (f64, f64), hi: (f64, f64), size: f64, equal: bool) -> Frame {
        let margin = 40.0;
        let span = |a: f64, b: f64| if b > a { b - a } else { 1.0 };
        let (w, h) = (span(lo.0, hi.0), span(lo.1, hi.1));
        let inner = size - 2.0 * margin;
        let scale = if equal {
            let s = inner / w.max(h);
            (s, s)
        } else {
            (inner / w, inner / h)
        };
        Frame {
            lo,
            scale,
            size,
            margin,
        }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        (
            self.margin + (x - self.lo.0) * self.scale.0,
            self.size - self.margin - (y - self.lo.1) * self.scale.1,
        )
    }
}

fn svg_open(size: f64, title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="10" y="20" font-family="sans-serif" font-size="13">{}</text>"#,
        escape(title)
    );
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// The cloud as dots and one arrow per probe from `x` to `R(x)`.
pub fn field_svg(title: &str, cloud: &[Point], arrows: &[(Point, Point)]) -> String {
    let all = cloud.iter().chain(arrows.iter().flat_map(|(a, b)| [a, b]));
    let (mut lo, mut hi) = (
        (f64::INFINITY, f64::INFINITY),
        (f64::NEG_INFINITY, f64::NEG_INFINITY),
    );
    for p in all {
        lo = (lo.0.min(p.x()), lo.1.min(p.y()));
        hi = (hi.0.max(p.x()), hi.1.max(p.y()));
    }
    let f = Frame::new(lo, hi, 640.0, true);
    let mut s = svg_open(640.0, title);
    s.push_str(
        r#"<defs><marker id="head" markerWidth="6" markerHeight="6" refX="5" refY="3" orient="auto"><path d="M0,0 L6,3 L0,6 z" fill="steelblue"/></marker></defs>"#,
    );
    s.push('\n');
    for (a, b) in arrows {
        let (x1, y1) = f.map(a.x(), a.y());
        let (x2, y2) = f.map(b.x(), b.y());
        let _ = writeln!(
            s,
            r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="steelblue" stroke-width="0.8" marker-end="url(#head)"/>"#
        );
    }
    for p in cloud {
        let (x, y) = f.map(p.x(), p.y());
        let _ = writeln!(
            s,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="1.5" fill="black"/>"#
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Line plot of one or more series against a shared x axis.
pub fn line_svg(title: &str, x_label: &str, series: &[(&str, Vec<(f64, f64)>)]) -> String {
    const COLORS: [&str; 4] = ["steelblue", "firebrick", "seagreen", "darkorange"];
    let (mut lo, mut hi) = (
        (f64::INFINITY, 0.0f64),
        (f64::NEG_INFINITY, f64::NEG_INFINITY),
    );
    for (_, pts) in series {
        for &(x, y) in pts.iter().filter(|p| p.0.is_finite() && p.1.is_finite()) {
            lo = (lo.0.min(x), lo.1.min(y));
            hi = (hi.0.max(x), hi.1.max(y));
        }
    }
    if !lo.0.is_finite() {
        lo = (0.0, 0.0);
        hi = (1.0, 1.0);
    }
    let f = Frame::new(lo, hi, 640.0, false);
    let mut s = svg_open(640.0, title);
    let (ax0, ay0) = f.map(lo.0, lo.1);
    let (ax1, ay1) = f.map(hi.0, hi.1);
    let _ = writeln!(
        s,
        r#"<polyline points="{ax0:.2},{ay1:.2} {ax0:.2},{ay0:.2} {ax1:.2},{ay0:.2}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11">{}</text>"#,
        ax1 - 80.0,
        ay0 + 28.0,
        escape(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="{ax0:.2}" y="{:.2}" font-family="sans-serif" font-size="11">{:.4}</text>"#,
        ay0 + 14.0,
        lo.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11">{:.4}</text>"#,
        ax1 - 30.0,
        ay0 + 14.0,
        hi.0
    );
    let _ = writeln!(
        s,
        r#"<text x="4" y="{:.2}" font-family="sans-serif" font-size="11">{:.4}</text>"#,
        ay1 + 4.0,
        hi.1
    );
    let _ = writeln!(
        s,
        r#"<text x="4" y="{:.2}" font-family="sans-serif" font-size="11">{:.4}</text>"#,
        ay0, lo.1
    );
    for (i, (name, pts)) in series.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let path: Vec<String> = pts
            .iter()
            .filter(|p| p.0.is_finite() && p.1.is_finite())
            .map(|&(x, y)| {
                let (u, v) = f.map(x, y);
                format!("{u:.2},{v:.2}")
            })
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            path.join(" ")
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" fill="{color}">{}</text>"#,
            ax0 + 10.0,
            ay1 + 14.0 * (i + 1) as f64,
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    s
}
