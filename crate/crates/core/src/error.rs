use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid web document: {0}")]
    Document(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("web degree must be at least 3, got {0}")]
    Degree(usize),

    #[error("expected {expected} coefficients or slopes, got {got}")]
    CoefficientCount { expected: usize, got: usize },

    #[error("slopes {first} and {second} coincide")]
    DuplicateSlopes { first: usize, second: usize },

    #[error("no row of B can be deleted to leave an invertible matrix")]
    NoValidPivotRow,

    #[error("operation requires d = 3, got d = {0}")]
    WrongDegree(usize),

    #[error("pole at the evaluation point in entry ({row}, {col})")]
    PoleAtPoint { row: usize, col: usize },

    #[error("jet division by a series vanishing at the base point")]
    JetDivisionByZero,

    #[error("jet truncation order exhausted; raise the expansion order")]
    JetPrecisionExhausted,
}

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }
}
