use thiserror::Error;

/// Errors raised by the median toolkit.
///
/// The variants are grouped by how a caller is expected to react: bad
/// input ([`Error::Parse`], [`Error::Invalid`]), a resource guard that
/// tripped ([`Error::CapExceeded`]), or input that violates a structural
/// assumption of the algorithms ([`Error::NotMedian`], [`Error::Invariant`]).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("{what} exceeds cap ({size} > {cap})")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("not a median graph: {0}")]
    NotMedian(String),

    #[error("invariant violation: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Invalid(_) => 1,
            Error::CapExceeded { .. } => 2,
            Error::NotMedian(_) | Error::Invariant(_) => 3,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
