use thiserror::Error;

/// Errors raised by the library. Dimension problems are never silently
/// broadcast; they surface here.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: expected {expected}, got {found}")]
    DimensionMismatch {
        op: &'static str,
        expected: String,
        found: String,
    },

    #[error("result of {op} would hold {entries} entries (limit {limit})")]
    DimensionOverflow {
        op: &'static str,
        entries: usize,
        limit: usize,
    },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("vector is not normalized (norm {norm})")]
    NotUnit { norm: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numerical check failed: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn mismatch(
        op: &'static str,
        expected: impl ToString,
        found: impl ToString,
    ) -> Self {
        Error::DimensionMismatch {
            op,
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }

    /// True for the errors that are caused by incompatible shapes.
    pub fn is_dimension_error(&self) -> bool {
        matches!(
            self,
            Error::DimensionMismatch { .. }
                | Error::DimensionOverflow { .. }
                | Error::IndexOutOfRange { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
