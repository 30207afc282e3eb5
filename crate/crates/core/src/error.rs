use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root requested of a value that is not a root of unity: {0}")]
    UnsupportedRadicand(String),
    #[error("zero matrix has no projective class")]
    ZeroMatrix,
    #[error("group closure exceeded cap {cap} ({partial} elements found so far)")]
    ClosureOverflow { cap: usize, partial: usize },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("corrupted Golay code: {0}")]
    CorruptCode(String),
    #[error("generator {index} does not preserve the octad set")]
    GeneratorRejected { index: usize },
    #[error("Sylow ascent exhausted its retry budget (seed {seed})")]
    SearchExhausted { seed: u64 },
    #[error("degenerate Gram matrix")]
    DegenerateGram,
    #[error("fixed locus meets the surface in infinitely many points: {0}")]
    InfiniteLocus(String),
    #[error("restriction cannot be solved over roots of unity: {0}")]
    UnsupportedRestriction(String),
    #[error("point is not on the surface: {0}")]
    PointNotOnSurface(String),
    #[error("relations do not hold modulo scalars: {0}")]
    NotProjectiveRep(String),
    #[error("audit step failed: {0}")]
    AuditFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid cache: {0}")]
    InvalidCache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
