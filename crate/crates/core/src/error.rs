use thiserror::Error;

/// Errors raised by the toolkit.
///
/// `Input` covers malformed objects and violated preconditions, `Domain`
/// covers parameters outside the range where a formula is stated, and
/// `Consistency` is raised when two independent computations disagree and
/// always indicates a bug. `Uncertified` reports a search that ran out of
/// budget where an exact answer was required.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("search not certified: {0}")]
    Uncertified(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
