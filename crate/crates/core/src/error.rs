use thiserror::Error;

/// Errors raised across the library. CLI exit codes are derived from
/// [`Error::exit_code`].
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("dimension {dim} exceeds the supported limit {limit}")]
    DimensionLimit { dim: usize, limit: usize },
    #[error("matrix is not square or is empty")]
    NotSquare,
    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("moduli {0} and {1} are not coprime")]
    NotCoprime(u64, u64),
    #[error("determinant must be {expected}, got {actual}")]
    Determinant { expected: String, actual: String },
    #[error("matrix is not unipotent")]
    NotUnipotent,
    #[error("seed matrix is not traceless")]
    NotTraceless,
    #[error("polynomial is not squarefree over the integers")]
    NotSquarefree,
    #[error("zero total at index {0}")]
    ZeroTotal(usize),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("reduction did not converge after {0} steps")]
    NoConvergence(usize),
    #[error("schema mismatch: expected {expected}, found {found}")]
    Schema { expected: String, found: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// 3 for budget overruns, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Budget(_) | Error::DimensionLimit { .. } => 3,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Invalid(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
