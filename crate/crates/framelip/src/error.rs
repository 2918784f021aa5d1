use thiserror::Error;

/// Errors produced by the analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not symmetric: max asymmetry {asymmetry:.3e} exceeds tolerance {tol:.3e}")]
    NonSymmetric { asymmetry: f64, tol: f64 },

    #[error("eigensolver did not converge within {sweeps} sweeps (off-diagonal {off:.3e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("iteration limit reached in {context}; best-so-far is inconclusive")]
    IterationLimit { context: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("collection of {m} vectors does not span R^{n}: lower frame bound {lower:.3e} <= {tol:.3e}")]
    NotAFrame { m: usize, n: usize, lower: f64, tol: f64 },

    #[error("{context}: m = {m} exceeds the enumeration cap {cap} and sampling fallback is disabled")]
    TooManyIndices { context: String, m: usize, cap: usize },

    #[error("frame contains a zero vector at index {index}")]
    ZeroVectorInFrame { index: usize },

    #[error("operator is not injective; Lipschitz bounds are undefined")]
    NotInjective,

    #[error("frame has {m} elements, operation requires m = n + 1 = {expected}")]
    WrongElementCount { m: usize, expected: usize },

    #[error("input lies outside the operator domain: {detail}")]
    OutsideDomain { detail: String },

    #[error("saturation is not injective even at lambda = sqrt(B); internal inconsistency")]
    NoUpperBound,

    #[error("frame does not have the complement property; intensity map is not injective")]
    NotPhaseRetrievable,

    #[error("distance between the pair is zero; ratio undefined")]
    ZeroDistance,

    #[error("domain has dimension {dim}, need at least 1")]
    DegenerateDomain { dim: usize },

    #[error("frame construction failed: {detail}")]
    ConstructionFailed { detail: String },

    #[error("invalid value: {0}")]
    Invalid(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
