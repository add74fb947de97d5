use thiserror::Error;

use crate::graph::VertexId;

/// Errors raised by the walk kernel, graph layer and engines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),

    #[error("graph is frozen; mutation is not allowed")]
    Frozen,

    #[error("parse error at {context}: {message}")]
    Parse { context: String, message: String },

    #[error("label {label:?} at vertex {vertex} has {targets} targets; quantum mode requires at most one")]
    Ambiguous {
        vertex: VertexId,
        label: String,
        targets: usize,
    },

    #[error("boundary hit at vertex {vertex} on label {label:?} with boundary policy `forbid`")]
    Boundary { vertex: VertexId, label: String },

    #[error("integrity check failed: {0}")]
    Integrity(String),

    #[error("capability exceeded: {0}")]
    Capability(String),

    #[error("walker stuck at vertex {0}: no movement edges")]
    Stuck(VertexId),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
