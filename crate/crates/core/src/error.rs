use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("quadrature did not converge: {context} (error estimate {err:.3e})")]
    NonConvergence { context: String, err: f64 },

    #[error("degenerate cutoff: normalization integral is zero or underflowed")]
    DegenerateCutoff,

    #[error("majorant branch M_{j} is undefined for order {order}")]
    UnsupportedBranch { j: u8, order: String },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("sup did not stabilize for any probed radius (grid cap {cap})")]
    NoStabilization { cap: f64 },

    #[error("invalid cutoff: {0}")]
    InvalidCutoff(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
