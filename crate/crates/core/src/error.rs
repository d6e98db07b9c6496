use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("cannot parse `{0}` as a rational number")]
    ParseRational(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("symbol {0} is outside the alphabet 1..=4")]
    BadSymbol(u8),
    #[error("refinement budget exceeded ({vertices} vertices)")]
    RefinementBudgetExceeded { vertices: usize },
    #[error("curve hits an indeterminacy point at parameter {param}")]
    IndeterminacyHit { param: f64 },
    #[error("arc tracing failed at step {step}: {reason}")]
    Tracer { step: usize, reason: String },
    #[error("unresolved segment between parameters {from} and {to}")]
    UnresolvedSegment { from: f64, to: f64 },
    #[error("calibration failed: {0}")]
    Calibration(String),
    #[error("memory guard: n = {requested} exceeds the exact ceiling {ceiling}")]
    MemoryGuard { requested: usize, ceiling: usize },
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
