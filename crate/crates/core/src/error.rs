use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime in [2, 2^31]")]
    NotPrime(u64),

    #[error("operands live in different rings")]
    ContextMismatch,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{what}: {count} exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, count: u128, cap: u128 },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    /// An internal consistency check failed. Seeing this means a bug (or a
    /// counterexample to one of the identities the construction relies on).
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn cap(what: &'static str, count: u128, cap: u128) -> Self {
        Error::CapExceeded { what, count, cap }
    }
}
