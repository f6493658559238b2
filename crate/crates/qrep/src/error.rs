use thiserror::Error;

/// Errors surfaced by the construction and verification pipeline.
#[derive(Debug, Error)]
pub enum QrepError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("exact polynomial division left a remainder (implementation bug)")]
    InternalError,

    #[error("block graph node (level {level}, class {class}) has competing blocks")]
    StructureError { level: usize, class: usize },

    #[error(
        "stacked Gram rank {rank} exceeds column budget {budget} at (level {level}, class {class})"
    )]
    RankError {
        level: usize,
        class: usize,
        rank: usize,
        budget: usize,
    },

    #[error("Gram matrix has negative eigenvalue {value:.3e} at (level {level}, class {class})")]
    NegativeEigenvalue {
        level: usize,
        class: usize,
        value: f64,
    },

    #[error("defining-relation residual {residual:.3e} exceeds tolerance after assembly")]
    ConsistencyError { residual: f64 },

    #[error("diagonal entry {value} of h{index} is not within 1e-6 of an integer")]
    RoundingError { index: usize, value: f64 },

    #[error("block shape does not match spectra table: {0}")]
    ShapeError(String),

    #[error("representation dimension {dim} exceeds oracle cap {cap}")]
    CapExceeded { dim: usize, cap: usize },

    #[error("Gram eigenvalues cluster at the rank decision tolerance (weight {weight:?})")]
    NumericalRankAmbiguity { weight: (i64, i64) },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, QrepError>;
