//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("coefficient vector must have at least one entry")]
    EmptyVector,

    #[error("non-finite value encountered in {context}")]
    NonFinite { context: &'static str },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("eigenvalue iteration failed to converge for {what}")]
    NoConvergence { what: &'static str },

    #[error("{name} must be nonnegative, got {value}")]
    NegativeParameter { name: &'static str, value: f64 },

    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("grid of {grid} samples is too small, need at least {needed}")]
    GridTooSmall { grid: usize, needed: usize },

    #[error("sample count must be a power of two, got {value}")]
    NotPowerOfTwo { value: usize },

    #[error("{what}: expected at most {limit}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        limit: usize,
        got: usize,
    },

    #[error("symbol badly truncated: tail mass {tail_mass:.3e} exceeds {limit:.1e}")]
    ExcessiveTailMass { tail_mass: f64, limit: f64 },

    #[error("matrix is not positive semi-definite: eigenvalue {min_eigenvalue:.3e}")]
    IndefiniteGram { min_eigenvalue: f64 },

    #[error("branch pinning failed near grid index {index}: adjacent samples are inconsistent")]
    BranchPinning { index: usize },

    #[error("truncated evolution diverged near t = {t}")]
    FlowDiverged { t: f64 },
}
