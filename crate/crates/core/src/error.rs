use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug)]
pub enum Error {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed input file (bad header, unknown gate tag, grammar error).
    #[error("format error: {0}")]
    Format(String),

    /// Structural problem in a circuit (cycle, dangling fanin, arity).
    #[error("structural error: {0}")]
    Structure(String),

    /// Legal input that this toolkit deliberately does not handle.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// An equivalence check that was required to pass did not.
    #[error("verification failure: {0}")]
    Verification(String),

    #[error("invalid argument: {0}")]
    Usage(String),
}

impl Error {
    pub fn format(msg: impl Into<String>) -> Error {
        Error::Format(msg.into())
    }

    pub fn structure(msg: impl Into<String>) -> Error {
        Error::Structure(msg.into())
    }

    pub fn unsupported(msg: impl Into<String>) -> Error {
        Error::Unsupported(msg.into())
    }

    pub fn usage(msg: impl Into<String>) -> Error {
        Error::Usage(msg.into())
    }
}
