use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Operands live on different systems, or a value has the wrong shape
    /// for the system it is used with.
    #[error("mismatch: {0}")]
    Mismatch(String),

    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("set is not sigma-invariant")]
    NotInvariant,

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The query is well posed but not decidable in this model.
    #[error("unsupported query: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn mismatch<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Mismatch(msg.into()))
}

pub(crate) fn unsupported<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Unsupported(msg.into()))
}
