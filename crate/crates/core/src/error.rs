use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("grid needs at least {min} nodes, got {actual}")]
    TooFewNodes { min: usize, actual: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("singular band matrix: pivot {pivot:.3e} at row {row} (row scale {scale:.3e})")]
    SingularPivot { row: usize, pivot: f64, scale: f64 },

    #[error("non-finite values in {context} (blowup reached or dt too large)")]
    NonFinite { context: String },

    #[error("no convergence after {iterations} iterations (last change {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("iteration collapsed to zero after {iterations} iterations (bad initial guess)")]
    CollapsedToZero { iterations: usize },

    #[error("fit rejected: {0}")]
    Fit(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
