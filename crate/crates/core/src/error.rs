use thiserror::Error;

/// Errors produced by the codec, the address search and the analysis models.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An address assignment pair is unusable, e.g. two data pairs share a
    /// composite double-error address.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("no valid assignment found after exploring {explored} states")]
    NotFound { explored: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
