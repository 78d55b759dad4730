use thiserror::Error;

/// Errors produced by the library.
///
/// `TheoremViolation` is special: it marks a certificate that some
/// invariant which must hold on valid input failed. The CLI maps it to
/// exit code 2, everything else to 1.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("not an exceptional class: {0}")]
    NotExceptional(String),
    #[error("iteration cap {0} exceeded")]
    IterationCap(usize),
    #[error("group closure exceeded limit {0}")]
    LimitExceeded(usize),
    #[error("not an isometry: {0}")]
    NotIsometry(String),
    #[error("action is not faithful: {0}")]
    Unfaithful(String),
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn is_violation(&self) -> bool {
        matches!(self, Error::TheoremViolation(_))
    }
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
