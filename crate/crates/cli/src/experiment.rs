//! The named experiments and their reports.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use qwalk_core::classical::{classical_bulk_history, classical_random_walk, total_count, BulkCounts, LINE_LABELS};
use qwalk_core::graph::{build_double_slit, build_fixture_graph, build_line, DoubleSlit, PropertyGraph, VertexId};
use qwalk_core::setops::{branch_walk, format_listing, intersect, intersect_filter, sym_diff_filter, FrequencyBranch};
use qwalk_core::walk::{collapse, measure, StepOptions, WalkConfig, WalkState, Walker};
use qwalk_core::{CoinOperator, Complex, SpinVector};

use crate::error::{CliError, CliResult};

/// Per-iteration `|Σp − 1|` allowed before a run is rejected.
pub const NORM_DRIFT_LIMIT: f64 = 1e-9;

/// Required probability of finding the walker back at its start.
pub const RECOVERY_THRESHOLD: f64 = 1.0 - 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExperimentKind {
    LineClassical,
    LineHadamard,
    LineBalanced,
    LineBounded,
    DoubleSlit,
    SetopsDemo,
    ReverseCheck,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 7] = [
        ExperimentKind::LineClassical,
        ExperimentKind::LineHadamard,
        ExperimentKind::LineBalanced,
        ExperimentKind::LineBounded,
        ExperimentKind::DoubleSlit,
        ExperimentKind::SetopsDemo,
        ExperimentKind::ReverseCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::LineClassical => "line-classical",
            ExperimentKind::LineHadamard => "line-hadamard",
            ExperimentKind::LineBalanced => "line-balanced",
            ExperimentKind::LineBounded => "line-bounded",
            ExperimentKind::DoubleSlit => "double-slit",
            ExperimentKind::SetopsDemo => "setops-demo",
            ExperimentKind::ReverseCheck => "reverse-check",
        }
    }

    fn is_lattice(self) -> bool {
        self == ExperimentKind::DoubleSlit
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown experiment '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoinKind {
    Hadamard,
    BalancedY,
    Grover,
}

impl CoinKind {
    pub fn operator(self) -> CoinOperator {
        match self {
            CoinKind::Hadamard => CoinOperator::hadamard(),
            CoinKind::BalancedY => CoinOperator::balanced_y(),
            CoinKind::Grover => CoinOperator::grover4(),
        }
    }

    pub fn dim(self) -> usize {
        match self {
            CoinKind::Hadamard | CoinKind::BalancedY => 2,
            CoinKind::Grover => 4,
        }
    }
}

/// Parses `"re,im;re,im;..."`.
pub fn parse_spin(text: &str) -> CliResult<SpinVector> {
    let bad = |why: String| CliError::Usage(format!("--initial-spin '{text}': {why}"));
    let mut comps = Vec::new();
    for part in text.split(';') {
        let (re, im) = part
            .split_once(',')
            .ok_or_else(|| bad(format!("component '{part}' is not 're,im'")))?;
        let parse = |s: &str| s.trim().parse::<f64>().map_err(|e| bad(format!("'{}': {e}", s.trim())));
        let (re, im) = (parse(re)?, parse(im)?);
        comps.push(Complex::try_new(re, im).ok_or_else(|| bad("non-finite component".into()))?);
    }
    SpinVector::new(comps).map_err(|e| bad(e.to_string()))
}

/// Command-line overrides; `None` keeps the experiment default.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub vertices: Option<usize>,
    pub width: Option<usize>,
    pub height: Option<usize>,
    pub steps: Option<u64>,
    pub coin: Option<CoinKind>,
    pub initial_spin: Option<SpinVector>,
    pub start: Option<u32>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
}

fn serialize_spin<S: Serializer>(spin: &SpinVector, s: S) -> Result<S::Ok, S::Error> {
    let pairs: Vec<[f64; 2]> = spin.components().iter().map(|&c| c.into()).collect();
    pairs.serialize(s)
}

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertices: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub width: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub height: Option<usize>,
    pub steps: u64,
    pub coin: CoinKind,
    #[serde(serialize_with = "serialize_spin")]
    pub initial_spin: SpinVector,
    pub start: u32,
    pub seed: u64,
    /// Worker threads for the step engine; results do not depend on it.
    #[serde(skip)]
    pub threads: usize,
}

impl ExperimentParams {
    pub fn defaults(kind: ExperimentKind) -> Self {
        let left = SpinVector::basis(2, 0);
        let line = |steps, spin| ExperimentParams {
            vertices: Some(100),
            width: None,
            height: None,
            steps,
            coin: CoinKind::Hadamard,
            initial_spin: spin,
            start: 50,
            seed: 0,
            threads: 1,
        };
        match kind {
            ExperimentKind::LineClassical | ExperimentKind::LineHadamard | ExperimentKind::ReverseCheck => {
                line(50, left)
            }
            ExperimentKind::LineBalanced => line(
                50,
                SpinVector::new(vec![Complex::real(FRAC_1_SQRT_2), Complex::new(0.0, FRAC_1_SQRT_2)])
                    .expect("finite"),
            ),
            ExperimentKind::LineBounded => line(100, left),
            ExperimentKind::DoubleSlit => ExperimentParams {
                vertices: None,
                width: Some(20),
                height: Some(20),
                steps: 26,
                coin: CoinKind::Grover,
                initial_spin: SpinVector::basis(4, 2),
                start: 10,
                seed: 0,
                threads: 1,
            },
            ExperimentKind::SetopsDemo => ExperimentParams {
                vertices: None,
                width: None,
                height: None,
                steps: 1,
                coin: CoinKind::Hadamard,
                initial_spin: left,
                start: 0,
                seed: 0,
                threads: 1,
            },
        }
    }

    pub fn with_overrides(kind: ExperimentKind, o: &Overrides) -> CliResult<Self> {
        let mut p = ExperimentParams::defaults(kind);
        let reject = |flag: &str| CliError::Usage(format!("{flag} does not apply to {kind}"));
        if let Some(n) = o.vertices {
            if p.vertices.is_none() {
                return Err(reject("--vertices"));
            }
            p.vertices = Some(n);
        }
        if o.width.is_some() || o.height.is_some() {
            if !kind.is_lattice() {
                return Err(reject("--width/--height"));
            }
            p.width = o.width.or(p.width);
            p.height = o.height.or(p.height);
            if o.start.is_none() {
                p.start = (p.width.unwrap() / 2) as u32;
            }
        }
        if kind == ExperimentKind::SetopsDemo
            && (o.steps.is_some() || o.coin.is_some() || o.initial_spin.is_some() || o.start.is_some())
        {
            return Err(reject("walk parameters"));
        }
        if kind == ExperimentKind::LineClassical && (o.coin.is_some() || o.initial_spin.is_some()) {
            return Err(reject("--coin/--initial-spin"));
        }
        p.steps = o.steps.unwrap_or(p.steps);
        p.start = o.start.unwrap_or(p.start);
        p.seed = o.seed.unwrap_or(p.seed);
        p.threads = o.threads.unwrap_or(p.threads).max(1);
        if let Some(c) = o.coin {
            let want = if kind.is_lattice() { 4 } else { 2 };
            if c.dim() != want {
                return Err(CliError::Usage(format!("coin {c:?} has dimension {} but {kind} needs {want}", c.dim())));
            }
            p.coin = c;
        }
        if let Some(s) = &o.initial_spin {
            p.initial_spin = s.clone();
        }
        Ok(p)
    }
}

/// Distribution after one applied step (iteration 0 is the initial state).
#[derive(Debug, Clone, Serialize)]
pub struct IterationRecord {
    pub iteration: u64,
    pub total: f64,
    pub distribution: BTreeMap<u32, f64>,
    #[serde(skip)]
    pub counts: Option<BulkCounts>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct Integrity {
    pub max_norm_drift: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coin_unitarity_defect: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recovered_probability: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Sample {
    pub vertex: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub kind: ExperimentKind,
    pub params: ExperimentParams,
    pub iterations: Vec<IterationRecord>,
    pub final_distribution: BTreeMap<u32, f64>,
    /// Exact traverser counts of the final iteration (classical runs).
    pub final_counts: Option<BulkCounts>,
    pub final_state: Option<WalkState>,
    /// Normalized classical distribution after the same number of steps, for
    /// overlay plots of the quantum line walks.
    pub classical_reference: Option<BTreeMap<u32, f64>>,
    pub listing: Option<String>,
    pub integrity: Integrity,
    pub sample: Option<Sample>,
    pub grid: Option<DoubleSlit>,
    pub duration: Duration,
}

impl ExperimentReport {
    pub fn record(&self, iteration: u64) -> Option<&IterationRecord> {
        self.iterations.iter().find(|r| r.iteration == iteration)
    }

    pub fn total_count(&self) -> Option<BigUint> {
        self.final_counts.as_ref().map(total_count)
    }

    /// Final probabilities of the top lattice row, by column.
    pub fn film_row(&self) -> Option<Vec<f64>> {
        let g = self.grid.as_ref()?;
        let top = g.height - 1;
        Some(
            (0..g.width)
                .map(|c| *self.final_distribution.get(&g.vertex(top, c).0).unwrap_or(&0.0))
                .collect(),
        )
    }
}

fn to_map(d: &qwalk_core::walk::ProbabilityDistribution) -> BTreeMap<u32, f64> {
    d.probs().iter().map(|(v, p)| (v.0, *p)).collect()
}

fn normalized(counts: &BulkCounts) -> BTreeMap<u32, f64> {
    let total = total_count(counts);
    counts
        .iter()
        .map(|(v, c)| (v.0, ratio(c, &total)))
        .collect()
}

/// `a / b` as f64, exact up to the final rounding for values below 2^1000.
fn ratio(a: &BigUint, b: &BigUint) -> f64 {
    if *b == BigUint::default() {
        return 0.0;
    }
    let shift = b.bits().saturating_sub(60);
    let (a, b) = (a >> shift, b >> shift);
    a.to_f64().unwrap_or(f64::NAN) / b.to_f64().unwrap_or(f64::NAN)
}

pub fn run_experiment(kind: ExperimentKind, params: &ExperimentParams) -> CliResult<ExperimentReport> {
    let started = Instant::now();
    let mut report = match kind {
        ExperimentKind::LineClassical => run_classical(kind, params)?,
        ExperimentKind::LineHadamard | ExperimentKind::LineBalanced | ExperimentKind::LineBounded => {
            run_quantum_line(kind, params)?
        }
        ExperimentKind::ReverseCheck => run_reverse_check(kind, params)?,
        ExperimentKind::DoubleSlit => run_double_slit(kind, params)?,
        ExperimentKind::SetopsDemo => run_setops(kind, params)?,
    };
    report.duration = started.elapsed();
    Ok(report)
}

fn empty_report(kind: ExperimentKind, params: &ExperimentParams) -> ExperimentReport {
    ExperimentReport {
        kind,
        params: params.clone(),
        iterations: Vec::new(),
        final_distribution: BTreeMap::new(),
        final_counts: None,
        final_state: None,
        classical_reference: None,
        listing: None,
        integrity: Integrity::default(),
        sample: None,
        grid: None,
        duration: Duration::ZERO,
    }
}

fn line_graph(params: &ExperimentParams) -> CliResult<PropertyGraph> {
    Ok(build_line(params.vertices.unwrap_or(100))?)
}

fn run_classical(kind: ExperimentKind, params: &ExperimentParams) -> CliResult<ExperimentReport> {
    let g = line_graph(params)?;
    let start = VertexId(params.start);
    let history = classical_bulk_history(&g, start, params.steps, &LINE_LABELS)?;
    let mut report = empty_report(kind, params);
    for (i, counts) in history.iter().enumerate() {
        let distribution = normalized(counts);
        let total: f64 = distribution.values().sum();
        report.integrity.max_norm_drift = report.integrity.max_norm_drift.max((total - 1.0).abs());
        report.iterations.push(IterationRecord {
            iteration: i as u64,
            total,
            distribution,
            counts: Some(counts.clone()),
        });
    }
    let last = history.last().expect("history holds the initial counts");
    report.final_distribution = normalized(last);
    report.final_counts = Some(last.clone());
    let end = classical_random_walk(&g, start, params.steps, params.seed, &LINE_LABELS)?;
    report.sample = Some(Sample {
        vertex: end.0,
        basis: None,
    });
    check_drift(&report)?;
    Ok(report)
}

fn quantum_config(params: &ExperimentParams) -> CliResult<WalkConfig> {
    let coin = params.coin.operator();
    let start = VertexId(params.start);
    let spin = params.initial_spin.clone();
    Ok(if params.coin.dim() == 4 {
        WalkConfig::lattice(coin, start, spin)?
    } else {
        WalkConfig::line(coin, start, spin)?
    })
}

/// Runs `params.steps` forward steps, recording every iteration's
/// distribution and the worst norm drift.
fn evolve(
    graph: &PropertyGraph,
    cfg: &WalkConfig,
    params: &ExperimentParams,
    report: &mut ExperimentReport,
) -> CliResult<WalkState> {
    let walker = Walker::new(graph, cfg, StepOptions::with_threads(params.threads))?;
    let s0 = walker.init()?;
    let mut records = Vec::with_capacity(params.steps as usize + 1);
    let mut drift = 0.0f64;
    let mut observe = |s: &WalkState| -> qwalk_core::Result<()> {
        let d = measure(s)?;
        let total = d.total();
        drift = drift.max((total - 1.0).abs());
        records.push(IterationRecord {
            iteration: s.iteration(),
            total,
            distribution: to_map(&d),
            counts: None,
        });
        Ok(())
    };
    observe(&s0)?;
    let last = walker.run_observed(&s0, params.steps, &mut observe)?;
    report.iterations = records;
    report.integrity.max_norm_drift = drift;
    report.integrity.coin_unitarity_defect = Some(cfg.coin().unitarity_defect());
    Ok(last)
}

fn check_drift(report: &ExperimentReport) -> CliResult<()> {
    let drift = report.integrity.max_norm_drift;
    if drift > NORM_DRIFT_LIMIT {
        return Err(CliError::Integrity(format!(
            "{}: total probability drifted by {drift:e} (limit {NORM_DRIFT_LIMIT:e})",
            report.kind
        )));
    }
    Ok(())
}

fn finish_quantum(report: &mut ExperimentReport, state: WalkState, seed: u64) -> CliResult<()> {
    report.final_distribution = to_map(&measure(&state)?);
    let (v, b) = collapse(&state, seed)?;
    report.sample = Some(Sample {
        vertex: v.0,
        basis: Some(b),
    });
    report.final_state = Some(state);
    check_drift(report)
}

fn run_quantum_line(kind: ExperimentKind, params: &ExperimentParams) -> CliResult<ExperimentReport> {
    let g = line_graph(params)?;
    let cfg = quantum_config(params)?;
    let mut report = empty_report(kind, params);
    let last = evolve(&g, &cfg, params, &mut report)?;
    let reference = classical_bulk_history(&g, cfg.start(), params.steps, &LINE_LABELS)?;
    report.classical_reference = reference.last().map(normalized);
    finish_quantum(&mut report, last, params.seed)?;
    Ok(report)
}

fn run_reverse_check(kind: ExperimentKind, params: &ExperimentParams) -> CliResult<ExperimentReport> {
    let g = line_graph(params)?;
    let cfg = quantum_config(params)?;
    let mut report = empty_report(kind, params);
    let forward = evolve(&g, &cfg, params, &mut report)?;
    let walker = Walker::new(&g, &cfg, StepOptions::with_threads(params.threads))?;
    let mut drift = report.integrity.max_norm_drift;
    let back = walker.run_reverse(&forward, params.steps)?;
    drift = drift.max((back.total_norm_sq() - 1.0).abs());
    report.integrity.max_norm_drift = drift;
    let recovered = measure(&back)?.get(cfg.start());
    report.integrity.recovered_probability = Some(recovered);
    finish_quantum(&mut report, back, params.seed)?;
    if recovered < RECOVERY_THRESHOLD {
        return Err(CliError::Integrity(format!(
            "reverse evolution recovered probability {recovered} at {}, below {RECOVERY_THRESHOLD}",
            cfg.start()
        )));
    }
    Ok(report)
}

fn run_double_slit(kind: ExperimentKind, params: &ExperimentParams) -> CliResult<ExperimentReport> {
    let layout = DoubleSlit::sized(params.width.unwrap_or(20), params.height.unwrap_or(20))?;
    let g = build_double_slit(&layout)?;
    let cfg = quantum_config(params)?;
    let mut report = empty_report(kind, params);
    let last = evolve(&g, &cfg, params, &mut report)?;
    report.grid = Some(layout);
    finish_quantum(&mut report, last, params.seed)?;
    Ok(report)
}

/// The two-branch, intersect, symmetric-difference, collapsed-intersect and
/// three-branch listings on the fixture graph, separated by blank lines.
pub fn setops_listing() -> CliResult<String> {
    let g = build_fixture_graph();
    let v0 = VertexId(0);
    let two = [FrequencyBranch::out("read", 0), FrequencyBranch::out("wrote", 1)];
    let three = [
        FrequencyBranch::out("read", 0),
        FrequencyBranch::out("wrote", 1),
        FrequencyBranch::out("liked", 2),
    ];
    let walked = branch_walk(&g, v0, &two)?;
    let sections = [
        format_listing(&walked),
        format_listing(&intersect_filter(&walked)),
        format_listing(&sym_diff_filter(&walked)),
        format_listing(&intersect(&g, v0, &two)?),
        format_listing(&branch_walk(&g, v0, &three)?),
    ];
    Ok(sections.join("\n"))
}

fn run_setops(kind: ExperimentKind, params: &ExperimentParams) -> CliResult<ExperimentReport> {
    let mut report = empty_report(kind, params);
    report.listing = Some(setops_listing()?);
    Ok(report)
}
