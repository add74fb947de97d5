//! Acceptance suite: one `[PASS]`/`[FAIL]` line per criterion, non-zero exit
//! if any criterion fails.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qwalk_cli::emit::{render, Format};
use qwalk_cli::experiment::{setops_listing, ExperimentKind, ExperimentParams, ExperimentReport};
use qwalk_cli::golden::compare_tables;
use qwalk_cli::run_experiment;
use qwalk_core::graph::{build_double_slit, build_lattice, build_line, DoubleSlit, PropertyGraph, VertexId};
use qwalk_core::oracle::{dense_oracle_run, DenseOracle};
use qwalk_core::setops::{branch_walk, except_pattern, intersect_filter, sym_diff_filter, FrequencyBranch};
use qwalk_core::walk::{run_walk, WalkConfig};
use qwalk_core::{CoinOperator, SpinVector};

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn run(kind: ExperimentKind) -> ExperimentReport {
    run_experiment(kind, &ExperimentParams::defaults(kind)).expect("default experiment runs")
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("golden").join(name)
}

fn check_golden(report: &ExperimentReport, table: &str) -> Outcome {
    let cmp = compare_tables(report, &golden(table)).map_err(|e| e.to_string())?;
    match cmp.mismatch {
        None => Ok(format!("{table}: {} cells", cmp.cells_checked)),
        Some(m) => Err(format!("{table}: {m}")),
    }
}

/// Runs every check and joins their messages; fails if any check failed.
fn all(checks: Vec<Outcome>) -> Outcome {
    let failed = checks.iter().any(Result::is_err);
    let text = checks
        .into_iter()
        .map(|c| match c {
            Ok(s) => s,
            Err(s) => format!("FAILED {s}"),
        })
        .collect::<Vec<_>>()
        .join("; ");
    if failed {
        Err(text)
    } else {
        Ok(text)
    }
}

fn expect(ok: bool, text: String) -> Outcome {
    if ok {
        Ok(text)
    } else {
        Err(text)
    }
}

fn ac1() -> Outcome {
    let started = Instant::now();
    let report = run(ExperimentKind::LineClassical);
    let elapsed = started.elapsed().as_secs_f64();
    let counts = report.final_counts.as_ref().expect("classical counts");
    let v50 = counts.get(&VertexId(50)).cloned().unwrap_or_default();
    let total = report.total_count().expect("classical counts");
    let want_v50: BigUint = "126410606437752".parse().unwrap();
    let want_total: BigUint = "1125899906842624".parse().unwrap();
    all(vec![
        expect(v50 == want_v50, format!("count(v50) = {v50}")),
        expect(total == want_total, format!("total = {total}, expected {want_total}")),
        check_golden(&report, "table1-classical-counts.golden"),
        expect(elapsed < 1.0, format!("{elapsed:.3} s")),
    ])
}

fn ac2() -> Outcome {
    check_golden(&run(ExperimentKind::LineClassical), "table2-classical-probabilities.golden")
}

fn ac3() -> Outcome {
    let report = run(ExperimentKind::LineHadamard);
    let d = &report.final_distribution;
    let left: f64 = d.range(..50).map(|(_, p)| p).sum();
    let right: f64 = d.range(51..).map(|(_, p)| p).sum();
    all(vec![
        check_golden(&report, "table3-hadamard.golden"),
        expect(left > right, format!("left mass {left:.6} vs right mass {right:.6}")),
    ])
}

fn ac4() -> Outcome {
    let mut checks = Vec::new();
    for (kind, steps) in [
        (ExperimentKind::LineHadamard, 50),
        (ExperimentKind::LineBounded, 100),
        (ExperimentKind::DoubleSlit, 26),
    ] {
        let report = run(kind);
        let worst = report.iterations.iter().map(|r| (r.total - 1.0).abs()).fold(0.0, f64::max);
        let seen = report.iterations.len() as u64;
        checks.push(expect(
            seen == steps + 1 && worst <= 1e-9,
            format!("{kind} {} iterations, max |sum p - 1| {worst:.1e}", seen - 1),
        ));
    }
    all(checks)
}

fn ac5() -> Outcome {
    let report = run(ExperimentKind::ReverseCheck);
    let p50 = *report.final_distribution.get(&50).unwrap_or(&0.0);
    let elsewhere: f64 = report.final_distribution.iter().filter(|(v, _)| **v != 50).map(|(_, p)| p).sum();
    all(vec![
        expect(p50 >= 1.0 - 1e-6, format!("p(v50) = {p50:.12}")),
        expect(elsewhere <= 1e-6, format!("mass elsewhere {elsewhere:.1e}")),
    ])
}

fn ac6() -> Outcome {
    let mut checks = Vec::new();
    for (name, coin) in [
        ("H", CoinOperator::hadamard()),
        ("Y", CoinOperator::balanced_y()),
        ("R", CoinOperator::grover4()),
    ] {
        let d = coin.unitarity_defect();
        checks.push(expect(d <= 1e-10, format!("{name} {d:.1e}")));
    }
    let h = || CoinOperator::hadamard();
    let up = || SpinVector::basis(4, 2);
    let operators: Vec<(&str, PropertyGraph, WalkConfig)> = vec![
        (
            "U line(20)",
            build_line(20).unwrap(),
            WalkConfig::line(h(), VertexId(10), SpinVector::basis(2, 0)).unwrap(),
        ),
        (
            "U bounded line(10)",
            build_line(10).unwrap(),
            WalkConfig::line(h(), VertexId(5), SpinVector::basis(2, 0)).unwrap(),
        ),
        (
            "U lattice 6x6",
            build_lattice(6, 6).unwrap(),
            WalkConfig::lattice(CoinOperator::grover4(), VertexId(14), up()).unwrap(),
        ),
        (
            "U double slit",
            build_double_slit(&DoubleSlit::default()).unwrap(),
            WalkConfig::lattice(CoinOperator::grover4(), VertexId(10), up()).unwrap(),
        ),
    ];
    for (name, g, cfg) in &operators {
        let d = DenseOracle::build(g, cfg).map_err(|e| format!("{name}: {e}"))?.unitary().unitarity_defect();
        checks.push(expect(d <= 1e-10, format!("{name} {d:.1e}")));
    }
    all(checks)
}

fn ac7() -> Outcome {
    let report = run(ExperimentKind::LineBalanced);
    let d = &report.final_distribution;
    let p = |v: u32| *d.get(&v).unwrap_or(&0.0);
    let asym = (1..50).map(|k| (p(50 - k) - p(50 + k)).abs()).fold(0.0, f64::max);
    all(vec![
        check_golden(&report, "table4-balanced.golden"),
        expect(asym <= 1e-9, format!("max |p(50-k) - p(50+k)| = {asym:.1e}")),
    ])
}

fn ac8() -> Outcome {
    let started = Instant::now();
    let h = || CoinOperator::hadamard();
    let cases: Vec<(&str, PropertyGraph, WalkConfig, u64)> = vec![
        (
            "line(20)/10",
            build_line(20).unwrap(),
            WalkConfig::line(h(), VertexId(10), SpinVector::basis(2, 0)).unwrap(),
            10,
        ),
        (
            "bounded line(10)/15",
            build_line(10).unwrap(),
            WalkConfig::line(h(), VertexId(5), SpinVector::basis(2, 0)).unwrap(),
            15,
        ),
        (
            "lattice 6x6/8",
            build_lattice(6, 6).unwrap(),
            WalkConfig::lattice(CoinOperator::grover4(), VertexId(14), SpinVector::basis(4, 2)).unwrap(),
            8,
        ),
    ];
    let mut checks = Vec::new();
    for (name, g, cfg, steps) in &cases {
        let engine = run_walk(g, cfg, *steps).map_err(|e| e.to_string())?;
        let dense = dense_oracle_run(g, cfg, *steps).map_err(|e| e.to_string())?;
        let err = engine.max_amplitude_diff(&dense);
        checks.push(expect(err <= 1e-9, format!("{name} {err:.1e}")));
    }
    let elapsed = started.elapsed().as_secs_f64();
    checks.push(expect(elapsed < 5.0, format!("{elapsed:.3} s")));
    all(checks)
}

fn ac9() -> Outcome {
    let report = run(ExperimentKind::DoubleSlit);
    let total: f64 = report.final_distribution.values().sum();
    let film = report.film_row().expect("lattice report");
    let w = film.len();
    let asym = (0..w / 2).map(|c| (film[c] - film[w - 1 - c]).abs()).fold(0.0, f64::max);
    let top = film.iter().copied().fold(0.0, f64::max);
    let peak: Vec<usize> = (0..w).filter(|&c| film[c] == top).collect();
    let centre = [w / 2 - 1, w / 2];
    all(vec![
        expect((total - 1.0).abs() <= 1e-9, format!("total {total:.12}")),
        expect(asym <= 1e-9, format!("film row mirror asymmetry {asym:.3e}")),
        expect(
            peak.iter().any(|c| centre.contains(c)),
            format!("film maximum at column {peak:?}, centre pair {centre:?}"),
        ),
    ])
}

const LISTINGS: &str = "\
==>[v[1], [1, 1]]
==>[v[2], [1, 0]]
==>[v[3], [2, 0]]

==>[v[1], [1, 1]]

==>[v[2], [1, 0]]
==>[v[3], [2, 0]]

==>[v[1], [2, 0]]

==>[v[1], [1, 1, 1]]
==>[v[2], [1, 0, 1]]
==>[v[3], [2, 0, 1]]
";

const LABELS: [&str; 4] = ["a", "b", "c", "d"];

/// Brute-force set algebra on one random multigraph; returns a description
/// of the first disagreement.
fn random_multigraph_check(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let n: u32 = rng.gen_range(1..=50);
    let m = rng.gen_range(0..=300);
    let edges: Vec<(u32, usize, u32)> =
        (0..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..4), rng.gen_range(0..n))).collect();
    let mut g = PropertyGraph::new();
    for v in 0..n {
        g.add_vertex(v).unwrap();
    }
    for &(o, l, t) in &edges {
        g.add_edge(o, LABELS[l], t).unwrap();
    }
    let g = g.frozen();
    let out = |v: u32, l: usize| -> Vec<u32> { edges.iter().filter(|e| e.0 == v && e.1 == l).map(|e| e.2).collect() };

    let start = rng.gen_range(0..n);
    let k = rng.gen_range(2..=4);
    let branches: Vec<FrequencyBranch> = (0..k).map(|i| FrequencyBranch::out(LABELS[i], i)).collect();
    let results = branch_walk(&g, VertexId(start), &branches).map_err(|e| e.to_string())?;
    let sets: Vec<BTreeSet<u32>> = (0..k).map(|i| out(start, i).into_iter().collect()).collect();
    let union: BTreeSet<u32> = sets.iter().flatten().copied().collect();
    let inter: BTreeSet<u32> = union.iter().copied().filter(|v| sets.iter().all(|s| s.contains(v))).collect();
    let sym: BTreeSet<u32> =
        union.iter().copied().filter(|v| sets.iter().filter(|s| s.contains(v)).count() == 1).collect();
    let ids = |r: &[(VertexId, _)]| -> BTreeSet<u32> { r.iter().map(|(v, _)| v.0).collect() };
    if ids(&intersect_filter(&results)) != inter {
        return Err(format!("intersection differs (n={n}, m={m}, start={start})"));
    }
    if ids(&sym_diff_filter(&results)) != sym {
        return Err(format!("symmetric difference differs (n={n}, m={m}, start={start})"));
    }

    let label = rng.gen_range(0..4);
    let one: BTreeSet<u32> = out(start, label).into_iter().collect();
    let two: BTreeSet<u32> = one.iter().flat_map(|&v| out(v, label)).collect();
    let want: Vec<VertexId> = two.difference(&one).map(|&v| VertexId(v)).collect();
    let got = except_pattern(&g, VertexId(start), LABELS[label]).map_err(|e| e.to_string())?;
    if got != want {
        return Err(format!("2-hop minus 1-hop differs (n={n}, m={m}, start={start})"));
    }
    Ok(())
}

fn ac10() -> Outcome {
    let listing = setops_listing().map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e70);
    let mut random = Ok("200 random multigraphs agree".to_string());
    for i in 0..200 {
        if let Err(e) = random_multigraph_check(&mut rng) {
            random = Err(format!("graph {i}: {e}"));
            break;
        }
    }
    all(vec![
        expect(listing == LISTINGS, "fixture listings byte-for-byte".to_string()),
        random,
    ])
}

fn ac11() -> Outcome {
    let mut checks = Vec::new();
    for kind in ExperimentKind::ALL {
        let csv = |threads: usize| -> Vec<String> {
            let params = ExperimentParams {
                seed: 11,
                threads,
                ..ExperimentParams::defaults(kind)
            };
            let report = run_experiment(kind, &params).expect("experiment runs");
            render(&report, Format::Csv, true).into_iter().map(|a| a.contents).collect()
        };
        let base = csv(1);
        let same = [2, 4, 7].iter().all(|&t| csv(t) == base);
        checks.push(expect(same, format!("{kind}")));
    }
    let text = all(checks)?;
    Ok(format!("identical CSV at 1/2/4/7 threads: {text}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("AC1", "classical bulk counts on the 100-vertex line", ac1),
        ("AC2", "normalized classical distribution", ac2),
        ("AC3", "Hadamard walk table and left bias", ac3),
        ("AC4", "norm conservation every iteration", ac4),
        ("AC5", "50 forward + 50 reverse steps recover v50", ac5),
        ("AC6", "coin and dense operator unitarity", ac6),
        ("AC7", "balanced walk table and mirror symmetry", ac7),
        ("AC8", "engine matches the dense oracle", ac8),
        ("AC9", "double slit film row", ac9),
        ("AC10", "frequency-spin set operations", ac10),
        ("AC11", "thread-count determinism", ac11),
    ];
    let mut failures = 0;
    for (id, title, check) in criteria {
        match check() {
            Ok(detail) => println!("[PASS] {id} {title}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("[FAIL] {id} {title}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
