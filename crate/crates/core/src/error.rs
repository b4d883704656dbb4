use thiserror::Error;

/// Errors produced anywhere in the depth engine.
#[derive(Debug, Error)]
pub enum DepthError {
    #[error("empty input: no numeric rows")]
    EmptyInput,

    #[error("row {row}: expected {expected} fields, found {found}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("row {row}, column {col}: cannot parse {text:?} as a number")]
    NonNumeric { row: usize, col: usize, text: String },

    #[error("row {row}, column {col}: non-finite value")]
    NonFinite { row: usize, col: usize },

    #[error("malformed csv near row {row}: {msg}")]
    Csv { row: usize, msg: String },

    #[error("dimension mismatch: expected {expected} columns, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("covariance matrix is singular: numerical rank {rank} of {dim}")]
    Singular { rank: usize, dim: usize },

    #[error("degenerate sample: {0}")]
    Degenerate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl DepthError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        DepthError::InvalidArgument(msg.into())
    }

    pub(crate) fn degenerate(msg: impl Into<String>) -> Self {
        DepthError::Degenerate(msg.into())
    }

    /// True for errors caused by the content of the data rather than by how
    /// the library was called.
    pub fn is_data_error(&self) -> bool {
        !matches!(self, DepthError::InvalidArgument(_))
    }
}

pub type Result<T> = std::result::Result<T, DepthError>;
