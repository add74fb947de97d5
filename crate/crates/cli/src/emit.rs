//! Output files for a report. Every renderer is a pure function of the report
//! (wall-clock duration excluded), so reruns produce identical bytes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::experiment::{ExperimentKind, ExperimentReport, Integrity, IterationRecord, Sample};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

/// A named output file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

/// `vertex,probability` with 12 decimals, ascending vertex id.
pub fn distribution_csv(dist: &BTreeMap<u32, f64>) -> String {
    let mut out = String::from("vertex,probability\n");
    for (v, p) in dist {
        let _ = writeln!(out, "{v},{p:.12}");
    }
    out
}

fn iterations_csv(records: &[IterationRecord]) -> String {
    let mut out = String::from("iteration,vertex,probability\n");
    for r in records {
        for (v, p) in &r.distribution {
            let _ = writeln!(out, "{},{v},{p:.12}", r.iteration);
        }
    }
    out
}

fn counts_csv(report: &ExperimentReport) -> Option<String> {
    let counts = report.final_counts.as_ref()?;
    let mut out = String::from("vertex,count\n");
    for (v, c) in counts {
        let _ = writeln!(out, "{},{c}", v.0);
    }
    Some(out)
}

#[derive(Serialize)]
struct JsonReport<'a> {
    experiment: &'a str,
    params: &'a crate::experiment::ExperimentParams,
    integrity: &'a Integrity,
    #[serde(skip_serializing_if = "Option::is_none")]
    total_count: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sample: Option<&'a Sample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    listing: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    counts: Option<BTreeMap<u32, String>>,
    distribution: &'a BTreeMap<u32, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    iterations: Option<&'a [IterationRecord]>,
}

pub fn report_json(report: &ExperimentReport, with_iterations: bool) -> String {
    let view = JsonReport {
        experiment: report.kind.name(),
        params: &report.params,
        integrity: &report.integrity,
        total_count: report.total_count().map(|c| c.to_string()),
        sample: report.sample.as_ref(),
        listing: report.listing.as_deref(),
        counts: report
            .final_counts
            .as_ref()
            .map(|c| c.iter().map(|(v, n)| (v.0, n.to_string())).collect()),
        distribution: &report.final_distribution,
        iterations: with_iterations.then_some(report.iterations.as_slice()),
    };
    let mut s = serde_json::to_string_pretty(&view).expect("report serialization is infallible");
    s.push('\n');
    s
}

const CHART_W: f64 = 800.0;
const CHART_H: f64 = 400.0;
const MARGIN: f64 = 40.0;

fn polyline(points: &[(f64, f64)], style: &str) -> String {
    let mut pts = String::new();
    for (i, (x, y)) in points.iter().enumerate() {
        if i > 0 {
            pts.push(' ');
        }
        let _ = write!(pts, "{x:.2},{y:.2}");
    }
    format!("  <polyline fill=\"none\" {style} points=\"{pts}\"/>\n")
}

/// Probability against vertex id, with the classical reference (if any)
/// drawn dashed in gray underneath.
pub fn line_chart_svg(report: &ExperimentReport) -> String {
    let n = report.params.vertices.unwrap_or(100) as f64;
    let mut top = report.final_distribution.values().copied().fold(0.0, f64::max);
    if let Some(r) = &report.classical_reference {
        top = r.values().copied().fold(top, f64::max);
    }
    let top = if top > 0.0 { top * 1.05 } else { 1.0 };
    let sx = |v: u32| MARGIN + (v as f64 - 1.0) / (n - 1.0).max(1.0) * (CHART_W - 2.0 * MARGIN);
    let sy = |p: f64| CHART_H - MARGIN - p / top * (CHART_H - 2.0 * MARGIN);
    let series = |d: &BTreeMap<u32, f64>| -> Vec<(f64, f64)> {
        (1..=n as u32).map(|v| (sx(v), sy(*d.get(&v).unwrap_or(&0.0)))).collect()
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{CHART_W}\" height=\"{CHART_H}\" viewBox=\"0 0 {CHART_W} {CHART_H}\">"
    );
    let _ = writeln!(out, "  <title>{} after {} steps</title>", report.kind, report.params.steps);
    let (x0, y0, x1, y1) = (MARGIN, CHART_H - MARGIN, CHART_W - MARGIN, MARGIN);
    let _ = writeln!(out, "  <line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y0}\" stroke=\"black\"/>");
    let _ = writeln!(out, "  <line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{y1}\" stroke=\"black\"/>");
    let _ = writeln!(out, "  <text x=\"{x0}\" y=\"{}\" font-size=\"12\">1</text>", y0 + 16.0);
    let _ = writeln!(out, "  <text x=\"{x1}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">{n}</text>", y0 + 16.0);
    let _ = writeln!(out, "  <text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"end\">{top:.4}</text>", x0 - 4.0, y1 + 4.0);
    if let Some(r) = &report.classical_reference {
        out += &polyline(&series(r), "stroke=\"gray\" stroke-dasharray=\"6 4\"");
    }
    out += &polyline(&series(&report.final_distribution), "stroke=\"black\" stroke-width=\"1.5\"");
    out += "</svg>\n";
    out
}

/// One square per lattice vertex, row 0 at the bottom; lighter cells hold
/// more probability.
pub fn heatmap_svg(report: &ExperimentReport) -> String {
    let grid = report.grid.as_ref().expect("heatmap needs a lattice report");
    let cell = 20.0;
    let (w, h) = (grid.width, grid.height);
    let top = report.final_distribution.values().copied().fold(0.0, f64::max);
    let mut out = String::new();
    let (pw, ph) = (w as f64 * cell, h as f64 * cell);
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{pw}\" height=\"{ph}\" viewBox=\"0 0 {pw} {ph}\">"
    );
    let _ = writeln!(out, "  <title>{} after {} steps</title>", report.kind, report.params.steps);
    for row in 0..h {
        for col in 0..w {
            let p = *report.final_distribution.get(&grid.vertex(row, col).0).unwrap_or(&0.0);
            let level = if top > 0.0 { (p / top * 255.0).round() as u8 } else { 0 };
            let (x, y) = (col as f64 * cell, (h - 1 - row) as f64 * cell);
            let _ = writeln!(
                out,
                "  <rect x=\"{x}\" y=\"{y}\" width=\"{cell}\" height=\"{cell}\" fill=\"rgb({level},{level},{level})\"><title>v{} {p:.6e}</title></rect>",
                grid.vertex(row, col).0
            );
        }
    }
    out += "</svg>\n";
    out
}

/// Files for `format`. CSV also carries the exact counts (classical runs),
/// the final state dump (quantum runs) and, optionally, every iteration.
pub fn render(report: &ExperimentReport, format: Format, with_iterations: bool) -> Vec<Artifact> {
    let name = report.kind.name();
    let file = |ext: &str, contents: String| Artifact {
        name: format!("{name}{ext}"),
        contents,
    };
    if let Some(listing) = &report.listing {
        return match format {
            Format::Json => vec![file(".json", report_json(report, false))],
            _ => vec![file(".txt", listing.clone())],
        };
    }
    match format {
        Format::Csv => {
            let mut files = vec![file(".csv", distribution_csv(&report.final_distribution))];
            if let Some(c) = counts_csv(report) {
                files.push(file("-counts.csv", c));
            }
            if let Some(s) = &report.final_state {
                files.push(file("-state.json", s.to_dump_json()));
            }
            if with_iterations {
                files.push(file("-iterations.csv", iterations_csv(&report.iterations)));
            }
            files
        }
        Format::Json => vec![file(".json", report_json(report, with_iterations))],
        Format::Svg => {
            let svg = if report.kind == ExperimentKind::DoubleSlit {
                heatmap_svg(report)
            } else {
                line_chart_svg(report)
            };
            vec![file(".svg", svg)]
        }
    }
}

/// Writes the rendered files into `dir`, creating it if needed.
pub fn emit_distribution(
    report: &ExperimentReport,
    format: Format,
    with_iterations: bool,
    dir: &Path,
) -> CliResult<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut written = Vec::new();
    for a in render(report, format, with_iterations) {
        let path = dir.join(&a.name);
        fs::write(&path, a.contents).map_err(|e| CliError::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}
