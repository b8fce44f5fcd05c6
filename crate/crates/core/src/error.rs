use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeshError {
    #[error("matrix dimension must be at least 1")]
    InvalidDimension,
    #[error("mode {mode} out of range for a {n}-mode mesh (valid 0..={max})", max = n.saturating_sub(2))]
    InvalidMode { mode: usize, n: usize },
    #[error("shape mismatch: {left}x{left} vs {right}x{right}")]
    ShapeMismatch { left: usize, right: usize },
    #[error("expected {expected} entries, got {actual}")]
    EntryCount { expected: usize, actual: usize },
    #[error("cannot build a nullifying rotation for a zero vector")]
    DegenerateInput,
    #[error("rotation side mismatch: expected {expected:?}, got {actual:?}")]
    SideMismatch {
        expected: crate::givens::Side,
        actual: crate::givens::Side,
    },
    #[error("input is not unitary: max |U·U† - I| = {deviation:e} exceeds {tol:e}")]
    NotUnitary { deviation: f64, tol: f64 },
    #[error("non-finite value encountered {0}")]
    NonFinite(&'static str),
    #[error("invalid tolerances: {0}")]
    InvalidTolerances(&'static str),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, MeshError>;
