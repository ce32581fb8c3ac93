use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("group mismatch: {0}")]
    GroupMismatch(String),

    #[error("no fusion rule applies to {0}")]
    NoRule(String),

    #[error("closure did not saturate within {0} iterations")]
    ClosureDepth(usize),

    #[error("closure exceeded {0} finite parameters; the generated set is not finitely describable")]
    ClosureSize(usize),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("grid error: {0}")]
    Grid(String),

    #[error("test function does not vanish on the boundary of the quadrature box (max boundary value {0:e})")]
    SupportLeavesBox(f64),

    #[error("energy {energy:e} in the boundary guard band exceeds threshold {threshold:e}")]
    GuardBand { energy: f64, threshold: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
