use thiserror::Error;

/// Errors raised by the library.
///
/// The variants split into two families: malformed input (`InvalidInput`)
/// and violated mathematical preconditions (everything else). The CLI maps
/// the first family to exit code 1 and the second to exit code 2.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported weight: {0}")]
    UnsupportedWeight(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("unsupported coefficients: {0}")]
    UnsupportedCoefficients(String),
    #[error("level too small: {0}")]
    LevelTooSmall(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("pole at point: {0}")]
    PoleAtPoint(String),
    #[error("not a monodromy representation: {0}")]
    NotAMonodromyRep(String),
    #[error("inconsistent input: {0}")]
    InconsistentInput(String),
}

impl Error {
    /// True for errors caused by malformed input rather than mathematics.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::InvalidInput(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
