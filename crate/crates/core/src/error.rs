use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("a curve needs at least 2 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("edge index {edge} out of range 1..={n_edges}")]
    EdgeOutOfRange { edge: usize, n_edges: usize },
    #[error("subcurve start lies after its end")]
    InvertedRange,
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("extremal set must contain 0 and 1")]
    MissingEndpoints,
    #[error("k must be at least 1")]
    ZeroK,
    #[error("the candidate set cannot cover the remaining points: {0}")]
    Uncoverable(String),
    #[error("oracle instance too large: {0}")]
    TooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;
