//! Classical reference walks: exact bulk counting and a sampled single walker.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Direction, LabelId, PropertyGraph, VertexId, LEFT, RIGHT};

/// Labels followed when none are given.
pub const LINE_LABELS: [&str; 2] = [LEFT, RIGHT];

/// Traverser counts per vertex.
pub type BulkCounts = BTreeMap<VertexId, BigUint>;

fn label_ids(graph: &PropertyGraph, labels: &[&str]) -> Vec<LabelId> {
    labels.iter().filter_map(|l| graph.label_id(l)).collect()
}

/// One bulk step: every count is copied to each out-neighbor along each
/// label, and co-located counts add. Counts at a vertex without any such
/// edge are absorbed.
pub fn classical_bulk_step(graph: &PropertyGraph, counts: &BulkCounts, labels: &[&str]) -> Result<BulkCounts> {
    let ids = label_ids(graph, labels);
    let mut next = BulkCounts::new();
    for (&v, count) in counts {
        let idx = graph.vertex_index(v)?;
        for &l in &ids {
            for t in graph.neighbor_indices(idx, l, Direction::Out) {
                *next.entry(graph.vertex_at(t)).or_default() += count;
            }
        }
    }
    Ok(next)
}

/// Counts after `steps` bulk steps from a single traverser at `start`.
pub fn classical_bulk_walk(graph: &PropertyGraph, start: VertexId, steps: u64, labels: &[&str]) -> Result<BulkCounts> {
    let mut history = classical_bulk_history(graph, start, steps, labels)?;
    Ok(history.pop().expect("history holds the initial counts"))
}

/// Counts at iterations `0..=steps`.
pub fn classical_bulk_history(
    graph: &PropertyGraph,
    start: VertexId,
    steps: u64,
    labels: &[&str],
) -> Result<Vec<BulkCounts>> {
    graph.vertex_index(start)?;
    let mut history = vec![BulkCounts::from([(start, BigUint::from(1u32))])];
    for _ in 0..steps {
        let next = classical_bulk_step(graph, history.last().unwrap(), labels)?;
        history.push(next);
    }
    Ok(history)
}

pub fn total_count(counts: &BulkCounts) -> BigUint {
    counts.values().sum()
}

/// A single walker taking `steps` uniformly random moves among all edges
/// with the given labels.
pub fn classical_random_walk(
    graph: &PropertyGraph,
    start: VertexId,
    steps: u64,
    seed: u64,
    labels: &[&str],
) -> Result<VertexId> {
    let ids = label_ids(graph, labels);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx = graph.vertex_index(start)?;
    let mut options = Vec::new();
    for _ in 0..steps {
        options.clear();
        for &l in &ids {
            options.extend(graph.neighbor_indices(idx, l, Direction::Out));
        }
        if options.is_empty() {
            return Err(Error::Stuck(graph.vertex_at(idx)));
        }
        idx = options[rng.gen_range(0..options.len())];
    }
    Ok(graph.vertex_at(idx))
}
