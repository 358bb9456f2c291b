//! Error type shared by the whole kernel.

use thiserror::Error;

/// Every failure the kernel can report.  `Input` failures are malformed
/// data (wrong dimension, bad schema); `Math` failures are violated
/// geometric preconditions; `Undecidable` marks analyses the kernel
/// refuses to answer silently.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("precondition violated: {0}")]
    Math(String),
    #[error("undecidable with current reduction: {0}")]
    Undecidable(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
    pub fn math(msg: impl Into<String>) -> Self {
        Error::Math(msg.into())
    }
    pub fn undecidable(msg: impl Into<String>) -> Self {
        Error::Undecidable(msg.into())
    }

    /// Process exit code convention: 1 for input errors, 2 for
    /// mathematical precondition failures and undecidable analyses.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) => 1,
            Error::Math(_) | Error::Undecidable(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
