use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("model family {family} requires n >= {min}, got {n}")]
    FamilyTooSmall { family: &'static str, n: usize, min: usize },
    #[error("operation requires binary levels")]
    NonBinary,
    #[error("vector is not in the kernel of the matrix")]
    NotInKernel,
    #[error("matrix is not a Lawrence lifting")]
    NotLawrence,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("certificate failed: {0}")]
    CertificateFailed(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
