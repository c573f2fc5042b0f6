use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("generator count mismatch: {left} vs {right}")]
    GeneratorMismatch { left: usize, right: usize },

    #[error("generator index {index} out of range for m = {m}")]
    GeneratorOutOfRange { index: usize, m: usize },

    #[error("tensor arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("arity mismatch: {0}")]
    Arity(String),

    #[error("law has no moment for necklace {0}")]
    MissingMoment(String),

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("trace polynomial is not self-adjoint")]
    NotSelfAdjoint,

    #[error("fixed-point iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("time {t} is not a multiple of 2^-{level}")]
    Schedule { t: f64, level: u32 },

    #[error("quadrature failure: {0}")]
    Quadrature(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("config error at `{field}`: {msg}")]
    Config { field: String, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_same_m(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::GeneratorMismatch { left, right })
    }
}

pub(crate) fn check_index(index: usize, m: usize) -> Result<()> {
    if index < m {
        Ok(())
    } else {
        Err(Error::GeneratorOutOfRange { index, m })
    }
}
