//! Discrete quantum walks over labelled property graphs, with classical
//! reference walks and frequency-spin set operations.

pub mod classical;
pub mod coin;
pub mod complex;
pub mod error;
pub mod graph;
pub mod oracle;
pub mod setops;
pub mod spin;
pub mod walk;

pub use coin::CoinOperator;
pub use complex::Complex;
pub use error::{Error, Result};
pub use graph::{PropertyGraph, VertexId};
pub use spin::{SpinVector, SwapAxis};
pub use walk::{WalkConfig, WalkState};
