//! Quantum walk engine: configuration, state, stepping and measurement.

mod measure;
mod state;
mod step;

pub use measure::{collapse, measure, ProbabilityDistribution, MEASURE_INTEGRITY_TOLERANCE};
pub use state::WalkState;
pub use step::{init_state, quantum_step, run_reverse, run_walk, Schedule, StepOptions, Walker};

use serde::{Deserialize, Serialize};

use crate::coin::{CoinOperator, UNITARY_TOLERANCE};
use crate::error::{Error, Result};
use crate::graph::{Direction, VertexId, DOWN, LEFT, RIGHT, UP};
use crate::spin::{SpinVector, SwapAxis};

/// Tolerance on `‖initial_spin‖² = 1`.
pub const INITIAL_NORM_TOLERANCE: f64 = 1e-12;

/// What happens to a child whose branch edge does not exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryPolicy {
    /// Keep the child in place with the given component pair swapped.
    Reflect(SwapAxis),
    /// A non-zero child at a missing edge is an error.
    Forbid,
}

/// One traversal branch: move along `label` in `direction`, carrying only
/// spin component `projection_index`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchSpec {
    pub label: String,
    pub projection_index: usize,
    pub direction: Direction,
    pub boundary: BoundaryPolicy,
}

impl BranchSpec {
    pub fn out(label: &str, projection_index: usize, boundary: BoundaryPolicy) -> Self {
        BranchSpec {
            label: label.to_string(),
            projection_index,
            direction: Direction::Out,
            boundary,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkConfig {
    coin: CoinOperator,
    branches: Vec<BranchSpec>,
    start: VertexId,
    initial_spin: SpinVector,
}

impl WalkConfig {
    /// Validates dimensions, the branch permutation, reflection axes and the
    /// initial spin norm.
    pub fn new(
        coin: CoinOperator,
        branches: Vec<BranchSpec>,
        start: VertexId,
        initial_spin: SpinVector,
    ) -> Result<Self> {
        let dim = coin.dim();
        if branches.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: branches.len(),
            });
        }
        if initial_spin.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: initial_spin.dim(),
            });
        }
        let mut seen = vec![false; dim];
        for b in &branches {
            if b.projection_index >= dim || seen[b.projection_index] {
                return Err(Error::Config(format!(
                    "projection indices must be a permutation of 0..{dim}"
                )));
            }
            seen[b.projection_index] = true;
            if let BoundaryPolicy::Reflect(axis) = b.boundary {
                axis.validate(dim)?;
            }
        }
        let norm = initial_spin.norm_sq();
        if (norm - 1.0).abs() > INITIAL_NORM_TOLERANCE {
            return Err(Error::Config(format!("initial spin norm² is {norm}, expected 1")));
        }
        Ok(WalkConfig {
            coin,
            branches,
            start,
            initial_spin,
        })
    }

    /// Two-branch line walk: component 0 goes `left`, component 1 goes
    /// `right`, and missing edges reflect left↔right.
    pub fn line(coin: CoinOperator, start: VertexId, initial_spin: SpinVector) -> Result<Self> {
        let reflect = BoundaryPolicy::Reflect(SwapAxis::LEFT_RIGHT);
        WalkConfig::new(
            coin,
            vec![BranchSpec::out(LEFT, 0, reflect), BranchSpec::out(RIGHT, 1, reflect)],
            start,
            initial_spin,
        )
    }

    /// Four-branch lattice walk over left, right, up, down with reflection
    /// on the matching axis.
    pub fn lattice(coin: CoinOperator, start: VertexId, initial_spin: SpinVector) -> Result<Self> {
        let lr = BoundaryPolicy::Reflect(SwapAxis::LEFT_RIGHT);
        let ud = BoundaryPolicy::Reflect(SwapAxis::UP_DOWN);
        WalkConfig::new(
            coin,
            vec![
                BranchSpec::out(LEFT, 0, lr),
                BranchSpec::out(RIGHT, 1, lr),
                BranchSpec::out(UP, 2, ud),
                BranchSpec::out(DOWN, 3, ud),
            ],
            start,
            initial_spin,
        )
    }

    pub fn with_boundary(mut self, policy: BoundaryPolicy) -> Result<Self> {
        if let BoundaryPolicy::Reflect(axis) = policy {
            axis.validate(self.dim())?;
        }
        for b in &mut self.branches {
            b.boundary = policy;
        }
        Ok(self)
    }

    pub fn coin(&self) -> &CoinOperator {
        &self.coin
    }

    pub fn branches(&self) -> &[BranchSpec] {
        &self.branches
    }

    pub fn start(&self) -> VertexId {
        self.start
    }

    pub fn initial_spin(&self) -> &SpinVector {
        &self.initial_spin
    }

    pub fn dim(&self) -> usize {
        self.coin.dim()
    }

    pub fn coin_is_unitary(&self) -> bool {
        self.coin.is_unitary(UNITARY_TOLERANCE)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Complex;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn config_validation() {
        let h = CoinOperator::hadamard();
        assert!(WalkConfig::line(h.clone(), VertexId(50), SpinVector::basis(2, 0)).is_ok());
        assert!(WalkConfig::line(h.clone(), VertexId(50), SpinVector::basis(4, 0)).is_err());
        let unnormalized = SpinVector::from_real(&[1.0, 1.0]).unwrap();
        assert!(WalkConfig::line(h.clone(), VertexId(50), unnormalized).is_err());
        let sym = SpinVector::new(vec![Complex::real(FRAC_1_SQRT_2), Complex::new(0.0, FRAC_1_SQRT_2)]).unwrap();
        assert!(WalkConfig::line(h.clone(), VertexId(50), sym).is_ok());

        let dup = vec![
            BranchSpec::out(LEFT, 0, BoundaryPolicy::Forbid),
            BranchSpec::out(RIGHT, 0, BoundaryPolicy::Forbid),
        ];
        assert!(WalkConfig::new(h.clone(), dup, VertexId(1), SpinVector::basis(2, 0)).is_err());
        let bad_axis = vec![
            BranchSpec::out(LEFT, 0, BoundaryPolicy::Reflect(SwapAxis::UP_DOWN)),
            BranchSpec::out(RIGHT, 1, BoundaryPolicy::Forbid),
        ];
        assert!(WalkConfig::new(h, bad_axis, VertexId(1), SpinVector::basis(2, 0)).is_err());
    }
}
