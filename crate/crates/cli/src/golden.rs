//! Regression tables.
//!
//! ```text
//! # comment
//! experiment line-hadamard
//! tolerance 0.002
//! kind probabilities            (or: kind counts)
//! iteration 3: 47=1/8 49=5/8 51=1/8 53=1/8
//! iteration 50: 46=0.015 48=0.014
//! ```
//!
//! Integers and `p/q` fractions are exact (probabilities within 1e-12, counts
//! bit-for-bit); decimals match within the file's tolerance.

use std::fmt;
use std::path::Path;

use num_bigint::BigUint;

use crate::error::{CliError, CliResult};
use crate::experiment::{ExperimentKind, ExperimentReport};

/// Slack for values written as exact fractions.
pub const EXACT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    Probabilities,
    Counts,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GoldenValue {
    Fraction { num: BigUint, den: BigUint },
    Decimal(f64),
}

impl GoldenValue {
    fn parse(s: &str) -> Option<GoldenValue> {
        if let Some((n, d)) = s.split_once('/') {
            let (num, den) = (n.parse().ok()?, d.parse::<BigUint>().ok()?);
            return (den != BigUint::default()).then_some(GoldenValue::Fraction { num, den });
        }
        if let Ok(num) = s.parse::<BigUint>() {
            return Some(GoldenValue::Fraction {
                num,
                den: BigUint::from(1u32),
            });
        }
        s.parse::<f64>().ok().filter(|x| x.is_finite()).map(GoldenValue::Decimal)
    }

    fn as_f64(&self) -> f64 {
        match self {
            GoldenValue::Fraction { num, den } => big_f64(num) / big_f64(den),
            GoldenValue::Decimal(x) => *x,
        }
    }
}

fn big_f64(x: &BigUint) -> f64 {
    x.to_string().parse().unwrap_or(f64::INFINITY)
}

impl fmt::Display for GoldenValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GoldenValue::Fraction { num, den } if *den == BigUint::from(1u32) => write!(f, "{num}"),
            GoldenValue::Fraction { num, den } => write!(f, "{num}/{den}"),
            GoldenValue::Decimal(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoldenRow {
    pub line: usize,
    pub iteration: u64,
    pub cells: Vec<(u32, GoldenValue)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoldenTable {
    pub experiment: ExperimentKind,
    pub tolerance: f64,
    pub kind: TableKind,
    pub rows: Vec<GoldenRow>,
}

fn parse_error(line: usize, msg: impl fmt::Display) -> CliError {
    CliError::Usage(format!("golden file line {line}: {msg}"))
}

pub fn parse_golden(text: &str) -> CliResult<GoldenTable> {
    let mut experiment = None;
    let mut tolerance = None;
    let mut kind = TableKind::Probabilities;
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        let rest = rest.trim();
        match key {
            "experiment" => {
                experiment = Some(rest.parse::<ExperimentKind>().map_err(|e| parse_error(line, e))?);
            }
            "tolerance" => {
                let t: f64 = rest.parse().map_err(|e| parse_error(line, format!("tolerance '{rest}': {e}")))?;
                if !(t >= 0.0 && t.is_finite()) {
                    return Err(parse_error(line, "tolerance must be a nonnegative number"));
                }
                tolerance = Some(t);
            }
            "kind" => {
                kind = match rest {
                    "probabilities" => TableKind::Probabilities,
                    "counts" => TableKind::Counts,
                    other => return Err(parse_error(line, format!("unknown kind '{other}'"))),
                };
            }
            "iteration" => {
                let (n, cells) = rest
                    .split_once(':')
                    .ok_or_else(|| parse_error(line, "expected 'iteration N: vertex=value ...'"))?;
                let iteration = n
                    .trim()
                    .parse()
                    .map_err(|e| parse_error(line, format!("iteration '{}': {e}", n.trim())))?;
                let mut parsed = Vec::new();
                for cell in cells.split_whitespace() {
                    let (v, val) = cell
                        .split_once('=')
                        .ok_or_else(|| parse_error(line, format!("cell '{cell}' is not vertex=value")))?;
                    let v: u32 = v.parse().map_err(|e| parse_error(line, format!("vertex '{v}': {e}")))?;
                    let val = GoldenValue::parse(val).ok_or_else(|| parse_error(line, format!("value '{val}'")))?;
                    parsed.push((v, val));
                }
                if parsed.is_empty() {
                    return Err(parse_error(line, "row has no cells"));
                }
                rows.push(GoldenRow {
                    line,
                    iteration,
                    cells: parsed,
                });
            }
            other => return Err(parse_error(line, format!("unknown directive '{other}'"))),
        }
    }
    let experiment = experiment.ok_or_else(|| parse_error(0, "missing 'experiment' directive"))?;
    if rows.is_empty() {
        return Err(parse_error(0, "no rows"));
    }
    if kind == TableKind::Counts
        && rows
            .iter()
            .flat_map(|r| &r.cells)
            .any(|(_, v)| !matches!(v, GoldenValue::Fraction { den, .. } if *den == BigUint::from(1u32)))
    {
        return Err(parse_error(0, "count tables hold integers only"));
    }
    Ok(GoldenTable {
        experiment,
        tolerance: tolerance.unwrap_or(0.0),
        kind,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub line: usize,
    pub iteration: u64,
    pub vertex: u32,
    pub expected: String,
    pub actual: String,
    pub tolerance: f64,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "golden line {}, iteration {}, v{}: expected {}, got {} (tolerance {:e})",
            self.line, self.iteration, self.vertex, self.expected, self.actual, self.tolerance
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub cells_checked: usize,
    /// The first cell outside tolerance, in file order.
    pub mismatch: Option<Mismatch>,
}

impl Comparison {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

pub fn compare_report(report: &ExperimentReport, table: &GoldenTable) -> CliResult<Comparison> {
    if table.experiment != report.kind {
        return Err(CliError::Usage(format!(
            "golden table is for {}, report is {}",
            table.experiment, report.kind
        )));
    }
    let mut checked = 0;
    for row in &table.rows {
        let record = report.record(row.iteration).ok_or_else(|| {
            CliError::Usage(format!(
                "golden line {}: report has no iteration {} (ran {} steps)",
                row.line, row.iteration, report.params.steps
            ))
        })?;
        for (v, want) in &row.cells {
            checked += 1;
            let miss = |actual: String, tolerance: f64| Mismatch {
                line: row.line,
                iteration: row.iteration,
                vertex: *v,
                expected: want.to_string(),
                actual,
                tolerance,
            };
            match table.kind {
                TableKind::Counts => {
                    let counts = record.counts.as_ref().ok_or_else(|| {
                        CliError::Usage(format!("{} reports no traverser counts", report.kind))
                    })?;
                    let got = counts.get(&qwalk_core::VertexId(*v)).cloned().unwrap_or_default();
                    let GoldenValue::Fraction { num, .. } = want else { unreachable!("validated on parse") };
                    if got != *num {
                        return Ok(Comparison {
                            cells_checked: checked,
                            mismatch: Some(miss(got.to_string(), 0.0)),
                        });
                    }
                }
                TableKind::Probabilities => {
                    let got = *record.distribution.get(v).unwrap_or(&0.0);
                    let tol = match want {
                        GoldenValue::Fraction { .. } => EXACT_TOLERANCE,
                        GoldenValue::Decimal(_) => table.tolerance,
                    };
                    if (got - want.as_f64()).abs() > tol {
                        return Ok(Comparison {
                            cells_checked: checked,
                            mismatch: Some(miss(format!("{got:.12}"), tol)),
                        });
                    }
                }
            }
        }
    }
    Ok(Comparison {
        cells_checked: checked,
        mismatch: None,
    })
}

/// Loads the golden file at `path` and compares it with `report`.
pub fn compare_tables(report: &ExperimentReport, path: &Path) -> CliResult<Comparison> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    compare_report(report, &parse_golden(&text)?)
}
