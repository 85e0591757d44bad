use thiserror::Error;

/// Errors raised by design, estimation and benchmarking.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("ill-conditioned system: condition number {cond:.3e} exceeds {limit:.1e} ({what})")]
    IllConditioned { what: &'static str, cond: f64, limit: f64 },

    #[error("harmonic order {h} outside 1..={max}")]
    OrderOutOfRange { h: usize, max: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by numerical conditioning rather than user input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::IllConditioned { .. } | Error::Degenerate(_))
    }
}
