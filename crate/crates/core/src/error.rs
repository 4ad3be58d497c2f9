use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: edge ({i}, {j}) has asymmetric weights {w_ij} and {w_ji}")]
    AsymmetricWeight {
        path: PathBuf,
        i: usize,
        j: usize,
        w_ij: f64,
        w_ji: f64,
    },

    #[error("{path}:{line}: non-positive edge weight {weight}")]
    NonPositiveWeight {
        path: PathBuf,
        line: usize,
        weight: f64,
    },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("contraction set {set:?} does not induce a connected subgraph")]
    DisconnectedSet { set: Vec<usize> },

    #[error("graph is disconnected ({components} components)")]
    Disconnected { components: usize },

    #[error("matrix of size {size} exceeds the dense limit of {limit}")]
    TooLarge { size: usize, limit: usize },

    #[error("eigensolver did not converge: {0}")]
    NoConvergence(String),

    #[error("singular system: {0}")]
    Singular(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("operation requires a consistent coarsening hierarchy")]
    NotConsistent,

    #[error("unsupported hierarchy schema version {found} (expected {expected})")]
    SchemaVersion { found: u32, expected: u32 },

    #[error("corrupt hierarchy file: {0}")]
    CorruptHierarchy(String),

    #[error("hierarchy does not match the base graph: {0}")]
    GraphMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
