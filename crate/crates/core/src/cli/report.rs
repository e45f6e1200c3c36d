//! Scan rows and their CSV / SVG renderings.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::exactalg::rational::{serde_rational, to_f64};
use crate::exactalg::{format_rational, Rational};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    #[serde(with = "serde_rational")]
    pub a: Rational,
    #[serde(with = "serde_rational")]
    pub b: Rational,
    pub exists: bool,
    #[serde(rename = "A", with = "serde_rational")]
    pub a_ext: Rational,
    #[serde(rename = "B", with = "serde_rational")]
    pub b_ext: Rational,
    /// Minimum of `Θ` over interior sample points.
    pub min_theta: f64,
    pub csc: bool,
    #[serde(with = "serde_rational")]
    pub defect0: Rational,
    #[serde(with = "serde_rational")]
    pub defect1: Rational,
}

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("no scan rows to emit")]
    Empty,
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub const CSV_HEADER: &str = "a,b,exists,A,B,min_theta,csc";

pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            format_rational(&r.a),
            format_rational(&r.b),
            r.exists,
            format_rational(&r.a_ext),
            format_rational(&r.b_ext),
            r.min_theta,
            r.csc
        );
    }
    out
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 360.0;
const MARGIN: f64 = 48.0;

/// Static plot of `min_theta` against `a`, with one shaded band per maximal
/// run of consecutive rows where a solution exists.
pub fn scan_svg(rows: &[ScanRow]) -> String {
    let xs: Vec<f64> = rows.iter().map(|r| to_f64(&r.a)).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.min_theta).collect();
    let b = rows.first().map_or(1.0, |r| to_f64(&r.b));
    let (x0, x1) = (-b, b);
    let finite = ys.iter().copied().filter(|y| y.is_finite());
    let (mut y0, mut y1) = finite.fold((0.0f64, 0.0f64), |(lo, hi), y| (lo.min(y), hi.max(y)));
    if y1 - y0 < 1e-12 {
        y0 -= 1.0;
        y1 += 1.0;
    }
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);
    let half = if xs.len() > 1 {
        (xs[1] - xs[0]).abs() / 2.0
    } else {
        (x1 - x0) / 8.0
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let mut i = 0;
    while i < rows.len() {
        if !rows[i].exists {
            i += 1;
            continue;
        }
        let start = i;
        while i < rows.len() && rows[i].exists {
            i += 1;
        }
        let l = px((xs[start] - half).max(x0));
        let r = px((xs[i - 1] + half).min(x1));
        let _ = writeln!(
            svg,
            r##"<rect class="exists-band" x="{l:.2}" y="{MARGIN}" width="{:.2}" height="{:.2}" fill="#cfe8cf"/>"##,
            r - l,
            HEIGHT - 2.0 * MARGIN
        );
    }
    let _ = writeln!(
        svg,
        r#"<line x1="{MARGIN}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black"/>"#,
        py(0.0),
        WIDTH - MARGIN,
        py(0.0)
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{:.2}" stroke="black"/>"#,
        HEIGHT - MARGIN
    );
    let pts: Vec<String> = xs
        .iter()
        .zip(&ys)
        .filter(|(_, y)| y.is_finite())
        .map(|(x, y)| format!("{:.2},{:.2}", px(*x), py(*y)))
        .collect();
    let _ = writeln!(
        svg,
        r##"<polyline class="min-theta" fill="none" stroke="#1f4e9a" stroke-width="1.5" points="{}"/>"##,
        pts.join(" ")
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">a</text>"#,
        WIDTH / 2.0,
        HEIGHT - MARGIN / 3.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-size="12">min theta</text>"#,
        MARGIN / 4.0,
        MARGIN * 0.7
    );
    let _ = writeln!(
        svg,
        r#"<text x="{MARGIN}" y="{:.2}" font-size="10" text-anchor="middle">{x0}</text>"#,
        HEIGHT - MARGIN + 14.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-size="10" text-anchor="middle">{x1}</text>"#,
        WIDTH - MARGIN,
        HEIGHT - MARGIN + 14.0
    );
    svg.push_str("</svg>\n");
    svg
}

fn write_file(path: &Path, body: &str) -> Result<(), ReportError> {
    std::fs::write(path, body).map_err(|source| ReportError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Writes the requested artifacts. Nothing is written for an empty scan.
pub fn emit_scan(rows: &[ScanRow], svg_path: Option<&Path>, csv_path: Option<&Path>) -> Result<(), ReportError> {
    if rows.is_empty() {
        return Err(ReportError::Empty);
    }
    if let Some(p) = csv_path {
        write_file(p, &scan_csv(rows))?;
    }
    if let Some(p) = svg_path {
        write_file(p, &scan_svg(rows))?;
    }
    Ok(())
}
