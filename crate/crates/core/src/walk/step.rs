//! Bulk-synchronous quantum step: coin, branch projection and shift (with
//! boundary reflection), then a barrier merge of co-located children.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{BoundaryPolicy, WalkConfig, WalkState};
use crate::coin::CoinOperator;
use crate::error::{Error, Result};
use crate::graph::{Direction, LabelId, PropertyGraph, VertexId};
use crate::spin::SpinVector;

/// Order in which occupied vertices are processed and their children merged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Schedule {
    /// Ascending vertex id, then branch index.
    #[default]
    Canonical,
    /// A seeded random permutation of the occupied vertices on every step.
    Shuffled(u64),
}

#[derive(Debug, Clone, Default)]
pub struct StepOptions {
    /// Worker threads for child generation; 0 or 1 runs inline.
    pub threads: usize,
    /// Drop merged entries with `‖spin‖² < ε`. Off by default since pruning
    /// breaks exact reversibility.
    pub prune_epsilon: Option<f64>,
    pub schedule: Schedule,
}

impl StepOptions {
    pub fn with_threads(threads: usize) -> Self {
        StepOptions {
            threads,
            ..StepOptions::default()
        }
    }
}

#[derive(Debug)]
struct ResolvedBranch {
    label: Option<LabelId>,
    name: String,
    index: usize,
    direction: Direction,
    boundary: BoundaryPolicy,
}

type Children = Vec<(VertexId, SpinVector)>;

/// Steps one walk configuration over one frozen graph.
pub struct Walker<'a> {
    graph: &'a PropertyGraph,
    config: &'a WalkConfig,
    branches: Vec<ResolvedBranch>,
    adjoint: CoinOperator,
    options: StepOptions,
    pool: Option<rayon::ThreadPool>,
}

impl<'a> Walker<'a> {
    pub fn new(graph: &'a PropertyGraph, config: &'a WalkConfig, options: StepOptions) -> Result<Self> {
        if !graph.is_frozen() {
            return Err(Error::Config("walks require a frozen graph".into()));
        }
        let branches = config
            .branches()
            .iter()
            .map(|b| ResolvedBranch {
                label: graph.label_id(&b.label),
                name: b.label.clone(),
                index: b.projection_index,
                direction: b.direction,
                boundary: b.boundary,
            })
            .collect();
        let pool = if options.threads > 1 {
            Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(options.threads)
                    .build()
                    .map_err(|e| Error::Config(format!("thread pool: {e}")))?,
            )
        } else {
            None
        };
        Ok(Walker {
            graph,
            config,
            branches,
            adjoint: config.coin().adjoint(),
            options,
            pool,
        })
    }

    pub fn config(&self) -> &WalkConfig {
        self.config
    }

    /// The single classical traverser at the start vertex.
    pub fn init(&self) -> Result<WalkState> {
        let start = self.config.start();
        if !self.graph.contains(start) {
            return Err(Error::Config(format!("start vertex {start} is not in the graph")));
        }
        Ok(WalkState::single(start, self.config.initial_spin().clone()))
    }

    pub fn step(&self, state: &WalkState) -> Result<WalkState> {
        self.advance(state, false)
    }

    /// Exact inverse of [`Walker::step`]: move along inverted edges, merge,
    /// then apply the adjoint coin.
    pub fn step_back(&self, state: &WalkState) -> Result<WalkState> {
        self.advance(state, true)
    }

    pub fn run(&self, state: &WalkState, steps: u64) -> Result<WalkState> {
        self.run_observed(state, steps, |_| Ok(()))
    }

    /// Runs `steps` forward steps, handing every intermediate state to `observe`.
    pub fn run_observed(
        &self,
        state: &WalkState,
        steps: u64,
        mut observe: impl FnMut(&WalkState) -> Result<()>,
    ) -> Result<WalkState> {
        let mut cur = state.clone();
        for _ in 0..steps {
            cur = self.step(&cur)?;
            observe(&cur)?;
        }
        Ok(cur)
    }

    pub fn run_reverse(&self, state: &WalkState, steps: u64) -> Result<WalkState> {
        let mut cur = state.clone();
        for _ in 0..steps {
            cur = self.step_back(&cur)?;
        }
        Ok(cur)
    }

    fn advance(&self, state: &WalkState, reverse: bool) -> Result<WalkState> {
        let mut entries: Vec<(VertexId, &SpinVector)> =
            state.amplitudes().iter().map(|(&v, s)| (v, s)).collect();
        if let Schedule::Shuffled(seed) = self.options.schedule {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ state.iteration().wrapping_mul(0x9E37_79B9_7F4A_7C15));
            entries.shuffle(&mut rng);
        }

        let expand = |&(v, s): &(VertexId, &SpinVector)| self.children(v, s, reverse);
        let per_vertex: Vec<Children> = match &self.pool {
            Some(pool) => pool.install(|| entries.par_iter().map(expand).collect::<Result<_>>())?,
            None => entries.iter().map(expand).collect::<Result<_>>()?,
        };

        // Barrier: merge in processing order so the reduction is deterministic.
        let mut merged: BTreeMap<VertexId, SpinVector> = BTreeMap::new();
        for (v, child) in per_vertex.into_iter().flatten() {
            match merged.get_mut(&v) {
                Some(acc) => acc.merge_into(&child)?,
                None => {
                    merged.insert(v, child);
                }
            }
        }

        if reverse {
            for spin in merged.values_mut() {
                *spin = self.adjoint.apply(spin)?;
            }
        }
        if let Some(eps) = self.options.prune_epsilon {
            merged.retain(|_, s| s.norm_sq() >= eps);
        }
        let iteration = if reverse {
            state.iteration().saturating_sub(1)
        } else {
            state.iteration() + 1
        };
        Ok(WalkState::new(merged, iteration))
    }

    fn children(&self, v: VertexId, spin: &SpinVector, reverse: bool) -> Result<Children> {
        let dim = self.config.dim();
        if spin.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: spin.dim(),
            });
        }
        let idx = self.graph.vertex_index(v)?;
        let coined;
        let source = if reverse {
            spin
        } else {
            coined = self.config.coin().apply(spin)?;
            &coined
        };

        let mut out = Vec::with_capacity(self.branches.len());
        for b in &self.branches {
            let child = source.project_onto(b.index)?;
            let dir = if reverse { b.direction.reversed() } else { b.direction };
            let mut targets = b
                .label
                .into_iter()
                .flat_map(|l| self.graph.neighbor_indices(idx, l, dir));
            match (targets.next(), targets.next()) {
                (Some(t), None) => out.push((self.graph.vertex_at(t), child)),
                (Some(_), Some(_)) => {
                    return Err(Error::Ambiguous {
                        vertex: v,
                        label: b.name.clone(),
                        targets: 2 + targets.count(),
                    })
                }
                (None, _) => match b.boundary {
                    BoundaryPolicy::Reflect(axis) => out.push((v, child.reflect(axis)?)),
                    BoundaryPolicy::Forbid if child.is_zero() => {}
                    BoundaryPolicy::Forbid => {
                        return Err(Error::Boundary {
                            vertex: v,
                            label: b.name.clone(),
                        })
                    }
                },
            }
        }
        Ok(out)
    }
}

pub fn init_state(graph: &PropertyGraph, config: &WalkConfig) -> Result<WalkState> {
    Walker::new(graph, config, StepOptions::default())?.init()
}

pub fn quantum_step(state: &WalkState, graph: &PropertyGraph, config: &WalkConfig) -> Result<WalkState> {
    Walker::new(graph, config, StepOptions::default())?.step(state)
}

/// `steps` forward steps from the configured initial state.
pub fn run_walk(graph: &PropertyGraph, config: &WalkConfig, steps: u64) -> Result<WalkState> {
    let walker = Walker::new(graph, config, StepOptions::default())?;
    walker.run(&walker.init()?, steps)
}

pub fn run_reverse(
    graph: &PropertyGraph,
    state: &WalkState,
    config: &WalkConfig,
    steps: u64,
) -> Result<WalkState> {
    Walker::new(graph, config, StepOptions::default())?.run_reverse(state, steps)
}
