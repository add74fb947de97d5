//! Measurement: modulus-squared probabilities and sampled collapse.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::WalkState;
use crate::error::{Error, Result};
use crate::graph::VertexId;

/// `measure` fails when the total probability is further than this from 1.
pub const MEASURE_INTEGRITY_TOLERANCE: f64 = 1e-6;

/// Probability of finding the walker at each vertex.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ProbabilityDistribution {
    probs: BTreeMap<VertexId, f64>,
}

impl ProbabilityDistribution {
    pub fn new(probs: BTreeMap<VertexId, f64>) -> Self {
        ProbabilityDistribution { probs }
    }

    pub fn probs(&self) -> &BTreeMap<VertexId, f64> {
        &self.probs
    }

    /// Probability at `v`, zero for vertices not present.
    pub fn get(&self, v: VertexId) -> f64 {
        self.probs.get(&v).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.probs.values().sum()
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// `vertex,probability` rows sorted by vertex id, fixed 12 decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("vertex,probability\n");
        for (v, p) in &self.probs {
            let _ = writeln!(out, "{},{:.12}", v.0, p);
        }
        out
    }

    /// Vertex holding the largest probability; ties go to the lowest id.
    pub fn argmax(&self) -> Option<VertexId> {
        let mut best: Option<(VertexId, f64)> = None;
        for (&v, &p) in &self.probs {
            if best.is_none_or(|(_, b)| p > b) {
                best = Some((v, p));
            }
        }
        best.map(|(v, _)| v)
    }
}

/// Modulus-squared of every merged spin. The distribution is not
/// renormalized; a total further than 1e-6 from 1 is an integrity error.
pub fn measure(state: &WalkState) -> Result<ProbabilityDistribution> {
    let probs: BTreeMap<VertexId, f64> = state
        .amplitudes()
        .iter()
        .map(|(&v, s)| (v, s.norm_sq()))
        .collect();
    let dist = ProbabilityDistribution::new(probs);
    let total = dist.total();
    if (total - 1.0).abs() > MEASURE_INTEGRITY_TOLERANCE {
        return Err(Error::Integrity(format!(
            "total probability {total} deviates from 1 by more than {MEASURE_INTEGRITY_TOLERANCE}"
        )));
    }
    Ok(dist)
}

/// Samples a vertex from [`measure`], then a spin basis index from the
/// per-component modulus-squared at that vertex.
pub fn collapse(state: &WalkState, seed: u64) -> Result<(VertexId, usize)> {
    let dist = measure(state)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (vertices, weights): (Vec<VertexId>, Vec<f64>) = dist.probs().iter().map(|(&v, &p)| (v, p)).unzip();
    let pick = WeightedIndex::new(&weights)
        .map_err(|e| Error::Integrity(format!("cannot sample vertex distribution: {e}")))?;
    let vertex = vertices[pick.sample(&mut rng)];
    let spin = state.spin(vertex).expect("sampled vertex is occupied");
    let component_weights: Vec<f64> = spin.components().iter().map(|c| c.norm_sqr()).collect();
    let basis = WeightedIndex::new(&component_weights)
        .map_err(|e| Error::Integrity(format!("cannot sample spin components: {e}")))?
        .sample(&mut rng);
    Ok((vertex, basis))
}
