use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero vector")]
    ZeroVector,
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("nilpotency bound {bound} exceeded")]
    NonNilpotent { bound: usize },
    #[error("vector is not homogeneous")]
    NotHomogeneous,
    #[error("parameter is not integral")]
    NotIntegral,
    #[error("module is not reducible")]
    NotReducible,
    #[error("hypothesis failed: {0}")]
    HypothesisFail(String),
    #[error("reduction stuck: {0}")]
    Stuck(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::ZeroVector => "ZERO_VECTOR",
            Error::InvalidContext(_) => "INVALID_CONTEXT",
            Error::ContextMismatch(_) => "CONTEXT_MISMATCH",
            Error::NonNilpotent { .. } => "NON_NILPOTENT",
            Error::NotHomogeneous => "NOT_HOMOGENEOUS",
            Error::NotIntegral => "NOT_INTEGRAL",
            Error::NotReducible => "NOT_REDUCIBLE",
            Error::HypothesisFail(_) => "HYPOTHESIS_FAIL",
            Error::Stuck(_) => "STUCK",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
