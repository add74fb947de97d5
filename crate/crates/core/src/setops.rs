//! Frequency spins: integer branch tallies carried on traversers, giving
//! side-effect-free intersection, symmetric difference and exclusion.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_bigint::BigUint;

use crate::error::Result;
use crate::graph::{Direction, PropertyGraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FrequencySpin(Vec<BigUint>);

impl FrequencySpin {
    pub fn new(tallies: Vec<BigUint>) -> Self {
        FrequencySpin(tallies)
    }

    pub fn from_u64(tallies: &[u64]) -> Self {
        FrequencySpin(tallies.iter().map(|&t| BigUint::from(t)).collect())
    }

    /// `[1, 0, …, 0]` of length `dim`.
    pub fn unit(dim: usize) -> Self {
        let mut t = vec![BigUint::default(); dim];
        if let Some(first) = t.first_mut() {
            *first = BigUint::from(1u32);
        }
        FrequencySpin(t)
    }

    pub fn tallies(&self) -> &[BigUint] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn sum(&self) -> BigUint {
        self.0.iter().sum()
    }

    /// Every component set to the sum.
    pub fn split(&self) -> FrequencySpin {
        let s = self.sum();
        FrequencySpin(vec![s; self.dim()])
    }

    /// `[sum, 0, …, 0]`.
    pub fn norm_collapse(&self) -> FrequencySpin {
        let mut t = vec![BigUint::default(); self.dim()];
        if let Some(first) = t.first_mut() {
            *first = self.sum();
        }
        FrequencySpin(t)
    }

    /// Keeps component `index`, zeroes the rest.
    pub fn project(&self, index: usize) -> FrequencySpin {
        FrequencySpin(
            self.0
                .iter()
                .enumerate()
                .map(|(i, t)| if i == index { t.clone() } else { BigUint::default() })
                .collect(),
        )
    }

    /// Component-wise sum.
    pub fn merge(&mut self, other: &FrequencySpin) {
        assert_eq!(self.dim(), other.dim(), "frequency spin dimensions differ");
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
    }

    fn nonzero_count(&self) -> usize {
        self.0.iter().filter(|t| **t != BigUint::default()).count()
    }
}

impl fmt::Display for FrequencySpin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str("]")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BranchStep {
    /// Stay at the current vertex.
    Identity,
    Out(String),
    In(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyBranch {
    pub step: BranchStep,
    pub projection_index: usize,
}

impl FrequencyBranch {
    pub fn out(label: &str, projection_index: usize) -> Self {
        FrequencyBranch {
            step: BranchStep::Out(label.to_string()),
            projection_index,
        }
    }

    pub fn identity(projection_index: usize) -> Self {
        FrequencyBranch {
            step: BranchStep::Identity,
            projection_index,
        }
    }
}

/// One `(vertex, tallies)` entry per merged traverser, ascending by vertex.
pub type FrequencyResults = Vec<(VertexId, FrequencySpin)>;

/// Splits each traverser in `frontier`, sends one projected copy down each
/// branch (one copy per parallel edge), and merges arrivals per vertex.
pub fn branch_walk_from(
    graph: &PropertyGraph,
    frontier: &[(VertexId, FrequencySpin)],
    branches: &[FrequencyBranch],
) -> Result<FrequencyResults> {
    let mut merged: BTreeMap<VertexId, FrequencySpin> = BTreeMap::new();
    let mut place = |v: VertexId, s: &FrequencySpin| match merged.get_mut(&v) {
        Some(acc) => acc.merge(s),
        None => {
            merged.insert(v, s.clone());
        }
    };
    for (v, spin) in frontier {
        let idx = graph.vertex_index(*v)?;
        let split = spin.split();
        for b in branches {
            let child = split.project(b.projection_index);
            let (label, dir) = match &b.step {
                BranchStep::Identity => {
                    place(*v, &child);
                    continue;
                }
                BranchStep::Out(l) => (l, Direction::Out),
                BranchStep::In(l) => (l, Direction::In),
            };
            if let Some(l) = graph.label_id(label) {
                for t in graph.neighbor_indices(idx, l, dir) {
                    place(graph.vertex_at(t), &child);
                }
            }
        }
    }
    Ok(merged.into_iter().collect())
}

/// A single `[1, 0, …]` traverser at `start` taken through `branches`.
pub fn branch_walk(graph: &PropertyGraph, start: VertexId, branches: &[FrequencyBranch]) -> Result<FrequencyResults> {
    branch_walk_from(graph, &[(start, FrequencySpin::unit(branches.len()))], branches)
}

/// Entries reached by every branch.
pub fn intersect_filter(results: &[(VertexId, FrequencySpin)]) -> FrequencyResults {
    results
        .iter()
        .filter(|(_, s)| s.nonzero_count() == s.dim())
        .cloned()
        .collect()
}

/// Entries reached by exactly one branch.
pub fn sym_diff_filter(results: &[(VertexId, FrequencySpin)]) -> FrequencyResults {
    results.iter().filter(|(_, s)| s.nonzero_count() == 1).cloned().collect()
}

fn collapse_all(results: FrequencyResults) -> FrequencyResults {
    results.into_iter().map(|(v, s)| (v, s.norm_collapse())).collect()
}

/// [`branch_walk`], then [`intersect_filter`], then `norm_collapse`.
pub fn intersect(graph: &PropertyGraph, start: VertexId, branches: &[FrequencyBranch]) -> Result<FrequencyResults> {
    Ok(collapse_all(intersect_filter(&branch_walk(graph, start, branches)?)))
}

/// [`branch_walk`], then [`sym_diff_filter`], then `norm_collapse`.
pub fn sym_diff(graph: &PropertyGraph, start: VertexId, branches: &[FrequencyBranch]) -> Result<FrequencyResults> {
    Ok(collapse_all(sym_diff_filter(&branch_walk(graph, start, branches)?)))
}

/// Vertices two `label` hops from `start` that are not also one hop away.
///
/// Each one-hop traverser takes an identity branch (tally 0) and a `label`
/// branch (tally 1); merged entries with no identity tally are the answer.
pub fn except_pattern(graph: &PropertyGraph, start: VertexId, label: &str) -> Result<Vec<VertexId>> {
    let frontier: Vec<(VertexId, FrequencySpin)> = graph
        .out_neighbors(start, label)?
        .into_iter()
        .map(|v| (v, FrequencySpin::unit(2)))
        .collect();
    let branches = [FrequencyBranch::identity(0), FrequencyBranch::out(label, 1)];
    let results = branch_walk_from(graph, &frontier, &branches)?;
    Ok(results
        .into_iter()
        .filter(|(_, s)| s.tallies()[0] == BigUint::default())
        .map(|(v, _)| v)
        .collect())
}

/// One `==>[v[K], [t0, t1, ...]]` line per entry.
pub fn format_listing(results: &[(VertexId, FrequencySpin)]) -> String {
    let mut out = String::new();
    for (v, s) in results {
        let _ = writeln!(out, "==>[v[{}], {}]", v.0, s);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_fixture_graph;
    use proptest::prelude::*;

    fn fs(t: &[u64]) -> FrequencySpin {
        FrequencySpin::from_u64(t)
    }

    fn rw() -> Vec<FrequencyBranch> {
        vec![FrequencyBranch::out("read", 0), FrequencyBranch::out("wrote", 1)]
    }

    #[test]
    fn spin_rules() {
        assert_eq!(fs(&[1, 0]).split(), fs(&[1, 1]));
        assert_eq!(fs(&[0, 0]).split(), fs(&[0, 0]));
        assert_eq!(fs(&[2, 3]).split(), fs(&[5, 5]));
        assert_eq!(fs(&[1, 1]).norm_collapse(), fs(&[2, 0]));
        assert_eq!(fs(&[0, 0, 0]).norm_collapse(), fs(&[0, 0, 0]));
        assert_eq!(fs(&[2, 0, 1]).norm_collapse(), fs(&[3, 0, 0]));
        assert_eq!(fs(&[2, 0, 1]).to_string(), "[2, 0, 1]");
    }

    #[test]
    fn fixture_listings() {
        let g = build_fixture_graph();
        let v0 = VertexId(0);
        let all = branch_walk(&g, v0, &rw()).unwrap();
        assert_eq!(format_listing(&all), "==>[v[1], [1, 1]]\n==>[v[2], [1, 0]]\n==>[v[3], [2, 0]]\n");
        assert_eq!(format_listing(&intersect_filter(&all)), "==>[v[1], [1, 1]]\n");
        assert_eq!(format_listing(&sym_diff_filter(&all)), "==>[v[2], [1, 0]]\n==>[v[3], [2, 0]]\n");
        assert_eq!(format_listing(&intersect(&g, v0, &rw()).unwrap()), "==>[v[1], [2, 0]]\n");

        let mut three = rw();
        three.push(FrequencyBranch::out("liked", 2));
        assert_eq!(
            format_listing(&branch_walk(&g, v0, &three).unwrap()),
            "==>[v[1], [1, 1, 1]]\n==>[v[2], [1, 0, 1]]\n==>[v[3], [2, 0, 1]]\n"
        );
    }

    #[test]
    fn identity_and_unknown_labels() {
        let g = build_fixture_graph();
        let r = branch_walk(&g, VertexId(0), &[FrequencyBranch::identity(0)]).unwrap();
        assert_eq!(r, vec![(VertexId(0), fs(&[1]))]);
        let r = branch_walk(&g, VertexId(0), &[FrequencyBranch::out("nope", 0)]).unwrap();
        assert!(r.is_empty());
        assert!(intersect_filter(&[]).is_empty());
        assert!(sym_diff_filter(&[]).is_empty());
        assert!(branch_walk(&g, VertexId(99), &rw()).is_err());
    }

    fn graph_from(edges: &[(u32, u32)]) -> PropertyGraph {
        let mut g = PropertyGraph::new();
        for &(a, b) in edges {
            for v in [a, b] {
                if !g.contains(VertexId(v)) {
                    g.add_vertex(v).unwrap();
                }
            }
            g.add_edge(a, "knows", b).unwrap();
        }
        g.frozen()
    }

    #[test]
    fn except_examples() {
        let star = graph_from(&[(0, 1), (1, 2)]);
        assert_eq!(except_pattern(&star, VertexId(0), "knows").unwrap(), vec![VertexId(2)]);
        let covered = graph_from(&[(0, 1), (0, 2), (1, 2)]);
        assert!(except_pattern(&covered, VertexId(0), "knows").unwrap().is_empty());
        let triangle = graph_from(&[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(except_pattern(&triangle, VertexId(0), "knows").unwrap(), vec![VertexId(2)]);
    }

    proptest! {
        #[test]
        fn split_of_uniform_stays_uniform(t in 0u64..1000, d in 1usize..6) {
            let u = FrequencySpin::from_u64(&vec![t; d]);
            let once = u.split();
            prop_assert_eq!(&once, &FrequencySpin::from_u64(&vec![t * d as u64; d]));
            prop_assert_eq!(once.split(), FrequencySpin::from_u64(&vec![t * (d * d) as u64; d]));
            if d == 1 {
                prop_assert_eq!(u.split(), u);
            }
        }
    }
}
