use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty region: box union has no boxes")]
    EmptyRegion,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("resolution error: {0}")]
    Resolution(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("oracle error: {0}")]
    Oracle(String),

    #[error("threshold {threshold} is at or below the numeric floor {floor}; counts there are untrusted")]
    UntrustedThreshold { threshold: f64, floor: f64 },

    #[error("evaluation error: {0}")]
    Evaluation(String),

    #[error("consistency error: {0}")]
    Consistency(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
