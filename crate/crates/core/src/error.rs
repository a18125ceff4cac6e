//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by geometry primitives, topology construction, solvers and
/// the embedding/reduction machinery.
#[derive(Error, Debug)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("degenerate angle: ray from vertex has zero length")]
    DegenerateAngle,

    #[error("coincident input points")]
    CoincidentPoints,

    #[error("instance size {n} exceeds cap {cap}")]
    SizeCap { n: usize, cap: usize },

    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("construction failure at terminal {terminal}: Fermat margin {margin} <= 1/sqrt(6)")]
    ConstructionFailure { terminal: usize, margin: f64 },

    #[error("graph is not simple: {0}")]
    NotSimple(String),

    #[error("graph contains triangle ({0}, {1}, {2})")]
    TriangleFound(usize, usize, usize),

    #[error("closed neighborhoods of {0} and {1} overlap")]
    OverlappingNeighborhoods(usize, usize),

    #[error("vertex set is not a cover: edge ({0}, {1}) uncovered")]
    NotACover(usize, usize),

    #[error("malformed partition: {0}")]
    MalformedPartition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
