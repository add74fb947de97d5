//! Dense-matrix reference evolution `U = S·(I⊗C)` for small graphs.
//!
//! Amplitude `(v, c)` lives at index `vertex_index(v)·dim + c`, with vertices
//! in ascending id order.

use std::collections::BTreeMap;

use crate::coin::CoinOperator;
use crate::complex::{Complex, ZERO};
use crate::error::{Error, Result};
use crate::graph::PropertyGraph;
use crate::spin::SpinVector;
use crate::walk::{BoundaryPolicy, WalkConfig, WalkState};

/// Largest `|V|·dim` the dense oracle will build.
pub const MAX_DENSE_SIZE: usize = 5000;

#[derive(Debug, Clone)]
pub struct DenseOracle {
    dim: usize,
    vertices: Vec<crate::graph::VertexId>,
    shift: CoinOperator,
    coin_block: CoinOperator,
    unitary: CoinOperator,
}

impl DenseOracle {
    pub fn build(graph: &PropertyGraph, config: &WalkConfig) -> Result<Self> {
        let dim = config.dim();
        let nv = graph.vertex_count();
        let size = nv * dim;
        if size > MAX_DENSE_SIZE {
            return Err(Error::Capability(format!(
                "dense oracle of size {size} exceeds the limit of {MAX_DENSE_SIZE}"
            )));
        }

        let mut shift = CoinOperator::zeros(size);
        for vi in 0..nv {
            let v = graph.vertex_at(vi);
            for b in config.branches() {
                let c = b.projection_index;
                let targets: Vec<usize> = match graph.label_id(&b.label) {
                    Some(l) => graph.neighbor_indices(vi, l, b.direction).collect(),
                    None => Vec::new(),
                };
                let dst = match (targets.as_slice(), b.boundary) {
                    ([t], _) => t * dim + c,
                    ([], BoundaryPolicy::Reflect(axis)) => vi * dim + axis.map_index(c),
                    ([], BoundaryPolicy::Forbid) => {
                        return Err(Error::Capability(format!(
                            "forbid boundary at {v} has no matrix form"
                        )))
                    }
                    (many, _) => {
                        return Err(Error::Ambiguous {
                            vertex: v,
                            label: b.label.clone(),
                            targets: many.len(),
                        })
                    }
                };
                shift.set(dst, vi * dim + c, Complex::real(1.0));
            }
        }
        let coin_block = config.coin().tensor_identity(nv);
        let unitary = shift.matmul(&coin_block)?;
        Ok(DenseOracle {
            dim,
            vertices: graph.vertices().to_vec(),
            shift,
            coin_block,
            unitary,
        })
    }

    pub fn size(&self) -> usize {
        self.vertices.len() * self.dim
    }

    pub fn shift(&self) -> &CoinOperator {
        &self.shift
    }

    pub fn coin_block(&self) -> &CoinOperator {
        &self.coin_block
    }

    pub fn unitary(&self) -> &CoinOperator {
        &self.unitary
    }

    pub fn state_to_vector(&self, state: &WalkState) -> Result<Vec<Complex>> {
        let mut psi = vec![ZERO; self.size()];
        for (v, spin) in state.amplitudes() {
            let vi = self.vertices.binary_search(v).map_err(|_| Error::UnknownVertex(*v))?;
            if spin.dim() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    actual: spin.dim(),
                });
            }
            psi[vi * self.dim..(vi + 1) * self.dim].copy_from_slice(spin.components());
        }
        Ok(psi)
    }

    /// Vertices whose amplitudes are all exactly zero are left out.
    pub fn vector_to_state(&self, psi: &[Complex], iteration: u64) -> Result<WalkState> {
        if psi.len() != self.size() {
            return Err(Error::DimensionMismatch {
                expected: self.size(),
                actual: psi.len(),
            });
        }
        let mut amps = BTreeMap::new();
        for (vi, chunk) in psi.chunks(self.dim).enumerate() {
            if chunk.iter().any(|c| !c.is_zero()) {
                amps.insert(self.vertices[vi], SpinVector::new(chunk.to_vec())?);
            }
        }
        Ok(WalkState::new(amps, iteration))
    }

    /// `Uⁿ·ψ0`.
    pub fn run(&self, psi0: &[Complex], steps: u64) -> Vec<Complex> {
        let mut psi = psi0.to_vec();
        for _ in 0..steps {
            psi = self.unitary.apply_slice(&psi);
        }
        psi
    }
}

/// The full one-step unitary for `config` on `graph`.
pub fn dense_oracle_step(graph: &PropertyGraph, config: &WalkConfig) -> Result<CoinOperator> {
    Ok(DenseOracle::build(graph, config)?.unitary)
}

/// `steps` applications of the dense unitary to the configured initial state.
pub fn dense_oracle_run(graph: &PropertyGraph, config: &WalkConfig, steps: u64) -> Result<WalkState> {
    let oracle = DenseOracle::build(graph, config)?;
    let init = WalkState::single(config.start(), config.initial_spin().clone());
    let psi = oracle.run(&oracle.state_to_vector(&init)?, steps);
    oracle.vector_to_state(&psi, steps)
}
