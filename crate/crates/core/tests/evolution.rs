use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use qwalk_core::complex::Complex;
use qwalk_core::graph::{build_double_slit, build_line, DoubleSlit, PropertyGraph, VertexId};
use qwalk_core::walk::{collapse, measure, run_reverse, run_walk, Schedule, StepOptions, WalkConfig, WalkState, Walker};
use qwalk_core::{CoinOperator, SpinVector};

fn line100() -> PropertyGraph {
    build_line(100).unwrap()
}

fn hadamard() -> WalkConfig {
    WalkConfig::line(CoinOperator::hadamard(), VertexId(50), SpinVector::basis(2, 0)).unwrap()
}

fn balanced() -> WalkConfig {
    let spin = SpinVector::new(vec![Complex::real(FRAC_1_SQRT_2), Complex::new(0.0, FRAC_1_SQRT_2)]).unwrap();
    WalkConfig::line(CoinOperator::hadamard(), VertexId(50), spin).unwrap()
}

fn y_listing() -> WalkConfig {
    WalkConfig::line(CoinOperator::balanced_y(), VertexId(50), SpinVector::basis(2, 0)).unwrap()
}

fn double_slit() -> (PropertyGraph, WalkConfig) {
    let g = build_double_slit(&DoubleSlit::default()).unwrap();
    let cfg = WalkConfig::lattice(CoinOperator::grover4(), VertexId(10), SpinVector::basis(4, 2)).unwrap();
    (g, cfg)
}

fn configs() -> Vec<(&'static str, PropertyGraph, WalkConfig)> {
    let (ds, ds_cfg) = double_slit();
    vec![
        ("hadamard", line100(), hadamard()),
        ("y-listing", line100(), y_listing()),
        ("balanced", line100(), balanced()),
        (
            "bounded",
            build_line(10).unwrap(),
            WalkConfig::line(CoinOperator::hadamard(), VertexId(5), SpinVector::basis(2, 0)).unwrap(),
        ),
        ("double-slit", ds, ds_cfg),
    ]
}

#[test]
fn norm_is_conserved_every_step() {
    for (name, g, cfg) in configs() {
        let walker = Walker::new(&g, &cfg, StepOptions::default()).unwrap();
        let mut worst = 0.0f64;
        walker
            .run_observed(&walker.init().unwrap(), 100, |s| {
                worst = worst.max((s.total_norm_sq() - 1.0).abs());
                Ok(())
            })
            .unwrap();
        assert!(worst <= 1e-9, "{name}: drift {worst}");
    }
}

#[test]
fn fifty_steps_forward_and_back_recover_the_start() {
    for (name, g, cfg) in configs() {
        let s0 = WalkState::single(cfg.start(), cfg.initial_spin().clone());
        let back = run_reverse(&g, &run_walk(&g, &cfg, 50).unwrap(), &cfg, 50).unwrap();
        let err = back.max_amplitude_diff(&s0);
        assert!(err <= 1e-6, "{name}: error {err}");
        assert_eq!(back.iteration(), 0);
    }
}

#[test]
fn reverse_recovers_a_single_vertex() {
    let g = line100();
    let cfg = hadamard();
    let back = run_reverse(&g, &run_walk(&g, &cfg, 50).unwrap(), &cfg, 50).unwrap();
    let d = measure(&back).unwrap();
    assert!(d.get(VertexId(50)) >= 1.0 - 1e-6);
    let stray: f64 = d.probs().iter().filter(|(v, _)| v.0 != 50).map(|(_, p)| p).sum();
    assert!(stray < 1e-12);
}

#[test]
fn processing_order_does_not_matter() {
    for (name, g, cfg) in configs() {
        let canonical = run_walk(&g, &cfg, 30).unwrap();
        for seed in [1u64, 7, 12345] {
            let opts = StepOptions {
                schedule: Schedule::Shuffled(seed),
                ..StepOptions::default()
            };
            let w = Walker::new(&g, &cfg, opts).unwrap();
            let shuffled = w.run(&w.init().unwrap(), 30).unwrap();
            let err = canonical.max_amplitude_diff(&shuffled);
            assert!(err <= 1e-9, "{name} seed {seed}: {err}");
        }
    }
}

#[test]
fn thread_count_does_not_change_results() {
    for (name, g, cfg) in configs() {
        let single = run_walk(&g, &cfg, 26).unwrap();
        for threads in [2, 4, 7] {
            let w = Walker::new(&g, &cfg, StepOptions::with_threads(threads)).unwrap();
            let multi = w.run(&w.init().unwrap(), 26).unwrap();
            // Merge order is fixed, so the results are bit-identical.
            assert_eq!(single, multi, "{name} with {threads} threads");
        }
    }
}

#[test]
fn balanced_walk_is_mirror_symmetric() {
    let g = line100();
    let cfg = balanced();
    let w = Walker::new(&g, &cfg, StepOptions::default()).unwrap();
    w.run_observed(&w.init().unwrap(), 50, |s| {
        if s.iteration() % 2 == 0 {
            let d = measure(s)?;
            for k in 1..=50u32 {
                let (l, r) = (d.get(VertexId(50 - k)), d.get(VertexId(50 + k)));
                assert!((l - r).abs() <= 1e-9, "step {} k {k}: {l} vs {r}", s.iteration());
            }
        }
        Ok(())
    })
    .unwrap();
}

#[test]
fn y_coin_from_left_spin_reproduces_the_hadamard_distribution() {
    let g = line100();
    let a = measure(&run_walk(&g, &hadamard(), 50).unwrap()).unwrap();
    let b = measure(&run_walk(&g, &y_listing(), 50).unwrap()).unwrap();
    for (v, p) in a.probs() {
        assert!((p - b.get(*v)).abs() < 1e-12);
    }
}

#[test]
fn collapse_frequencies_follow_measure() {
    let g = line100();
    let state = run_walk(&g, &hadamard(), 10).unwrap();
    let dist = measure(&state).unwrap();
    let mut vertex_hits: BTreeMap<VertexId, u64> = BTreeMap::new();
    let mut basis_hits: BTreeMap<(VertexId, usize), u64> = BTreeMap::new();
    let trials = 100_000u64;
    for seed in 0..trials {
        let (v, b) = collapse(&state, seed).unwrap();
        *vertex_hits.entry(v).or_default() += 1;
        *basis_hits.entry((v, b)).or_default() += 1;
    }
    let n = trials as f64;
    for (v, p) in dist.probs() {
        let observed = *vertex_hits.get(v).unwrap_or(&0) as f64 / n;
        let sigma = (p * (1.0 - p) / n).sqrt();
        assert!((observed - p).abs() <= 3.0 * sigma + 1e-12, "{v}: {observed} vs {p}");
        for (i, c) in state.spin(*v).unwrap().components().iter().enumerate() {
            let q = c.norm_sqr();
            let seen = *basis_hits.get(&(*v, i)).unwrap_or(&0) as f64 / n;
            let s = (q * (1.0 - q) / n).sqrt();
            assert!((seen - q).abs() <= 3.0 * s + 1e-12, "{v}/{i}: {seen} vs {q}");
        }
    }
}
