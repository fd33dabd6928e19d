use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} qubits, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("amplitude array of length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("{n} qubits exceeds the dense limit of {limit}")]
    Capacity { n: usize, limit: usize },

    #[error("state norm {norm} deviates from 1 by more than {tol:e}")]
    NotNormalized { norm: f64, tol: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("operator is not Hermitian: {0}")]
    NotHermitian(String),

    #[error("reconstructed state has norm {norm}; input is not an embedded state")]
    NotAnEmbedding { norm: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("norm drift {0:e} during evolution exceeds 1e-8")]
    NormDrift(f64),

    #[error("monotone value exceeds 1 by {0:e}")]
    MonotoneOverflow(f64),

    #[error("unfittable series: {0}")]
    Unfittable(String),

    #[error("invalid config field `{field}`: {reason}")]
    InvalidConfig { field: String, reason: String },
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
