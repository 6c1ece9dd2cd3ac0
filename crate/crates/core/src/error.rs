use std::fmt;

/// Error type shared by the whole crate.
///
/// `Input` covers malformed or out-of-contract user data, `Verification` a
/// failed cross-check on otherwise valid data, and `Internal` a violated
/// internal invariant (these indicate a bug, not bad input).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    Input(String),
    Verification(String),
    Internal(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn verification(msg: impl Into<String>) -> Self {
        Error::Verification(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    /// Process exit code convention: 1 input error, 2 verification failure,
    /// 3 internal-consistency failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) => 1,
            Error::Verification(_) => 2,
            Error::Internal(_) => 3,
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Input(m) => write!(f, "input error: {m}"),
            Error::Verification(m) => write!(f, "verification failure: {m}"),
            Error::Internal(m) => write!(f, "internal consistency failure: {m}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
