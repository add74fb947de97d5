use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complex::Complex;
use crate::error::{Error, Result};
use crate::graph::VertexId;
use crate::spin::SpinVector;

/// The distributed wavefunction: one merged spin per occupied vertex plus
/// the number of steps applied so far.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    amplitudes: BTreeMap<VertexId, SpinVector>,
    iteration: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateDump {
    iteration: u64,
    entries: Vec<DumpEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DumpEntry {
    vertex: u32,
    spin: Vec<[f64; 2]>,
}

impl WalkState {
    pub fn new(amplitudes: BTreeMap<VertexId, SpinVector>, iteration: u64) -> Self {
        WalkState {
            amplitudes,
            iteration,
        }
    }

    pub fn single(vertex: VertexId, spin: SpinVector) -> Self {
        WalkState::new(BTreeMap::from([(vertex, spin)]), 0)
    }

    pub fn amplitudes(&self) -> &BTreeMap<VertexId, SpinVector> {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> BTreeMap<VertexId, SpinVector> {
        self.amplitudes
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    pub fn spin(&self, v: VertexId) -> Option<&SpinVector> {
        self.amplitudes.get(&v)
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// `Σ_v ‖spin_v‖²`.
    pub fn total_norm_sq(&self) -> f64 {
        self.amplitudes.values().map(SpinVector::norm_sq).sum()
    }

    /// Vertices whose spin is not identically zero.
    pub fn support(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.amplitudes
            .iter()
            .filter(|(_, s)| !s.is_zero())
            .map(|(&v, _)| v)
    }

    /// Largest per-component amplitude difference; vertices missing from
    /// one side count as zero spin.
    pub fn max_amplitude_diff(&self, other: &WalkState) -> f64 {
        let mut worst = 0.0f64;
        let keys = self.amplitudes.keys().chain(other.amplitudes.keys());
        for v in keys {
            let (a, b) = (self.amplitudes.get(v), other.amplitudes.get(v));
            let dim = a.or(b).map_or(0, SpinVector::dim);
            for i in 0..dim {
                let x = a.map_or(Complex::default(), |s| s[i]);
                let y = b.map_or(Complex::default(), |s| s[i]);
                worst = worst.max((x - y).abs());
            }
        }
        worst
    }

    /// State dump JSON with entries sorted by vertex id.
    pub fn to_dump_json(&self) -> String {
        let dump = StateDump {
            iteration: self.iteration,
            entries: self
                .amplitudes
                .iter()
                .map(|(v, s)| DumpEntry {
                    vertex: v.0,
                    spin: s.components().iter().map(|&c| c.into()).collect(),
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&dump).expect("state serialization is infallible");
        s.push('\n');
        s
    }

    pub fn from_dump_json(text: &str) -> Result<WalkState> {
        let dump: StateDump = serde_json::from_str(text).map_err(|e| Error::Parse {
            context: format!("line {} column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;
        let mut amplitudes = BTreeMap::new();
        for (i, e) in dump.entries.into_iter().enumerate() {
            let spin = SpinVector::new(e.spin.into_iter().map(Complex::from).collect()).map_err(|err| {
                Error::Parse {
                    context: format!("entries[{i}].spin"),
                    message: err.to_string(),
                }
            })?;
            if amplitudes.insert(VertexId(e.vertex), spin).is_some() {
                return Err(Error::Parse {
                    context: format!("entries[{i}].vertex"),
                    message: format!("duplicate vertex {}", e.vertex),
                });
            }
        }
        Ok(WalkState::new(amplitudes, dump.iteration))
    }
}
