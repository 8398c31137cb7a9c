use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("matrix has {found} entries but shape {rows}x{cols} needs {}", rows * cols)]
    EntryCount {
        rows: usize,
        cols: usize,
        found: usize,
    },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("singular value decomposition did not converge")]
    SvdNotConverged,
    #[error("input matrices are linearly dependent (index {index})")]
    LinearlyDependent { index: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("diagonal partition not found for {rows}x{cols} grid with k={k}")]
    PartitionNotFound { rows: usize, cols: usize, k: usize },
    #[error("missing or unusable certificate: {0}")]
    Certificate(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameters(msg.into())
}
