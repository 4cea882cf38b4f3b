use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LookoutError {
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("underdetermined covariance: n = {n} observations in m = {m} dimensions")]
    Underdetermined { n: usize, m: usize },

    #[error("non-finite value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("need at least two points")]
    TooFewPoints,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("tail too small; decrease beta ({exceedances} exceedances, need at least {required})")]
    TailTooSmall { exceedances: usize, required: usize },

    #[error("degenerate column under min-max scaling (column {0})")]
    DegenerateColumn(usize),

    #[error("covariance is not positive definite even after ridge regularization")]
    NotPositiveDefinite,

    #[error("invalid experiment: {0}")]
    InvalidExperiment(String),

    #[error("line {line}: {message}")]
    Csv { line: u64, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for LookoutError {
    fn from(e: std::io::Error) -> Self {
        LookoutError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, LookoutError>;
