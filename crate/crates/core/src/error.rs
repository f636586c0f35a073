use thiserror::Error;

/// Errors produced by the arithmetic, sieve and persistence layers.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The request needs more memory or range than this build supports.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// A sieve table does not reach far enough to answer exactly.
    #[error("sieve limit {limit} is too small: need at least 2^{needed_log2}")]
    InsufficientSieve { limit: u64, needed_log2: u32 },

    /// A state that the arithmetic rules out was observed. Always a bug.
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    /// A psi-bar trajectory failed to reach 2 within the internal cap.
    #[error("trajectory did not reach 2 within {cap} iterations")]
    TrajectoryCap { cap: usize },

    /// A bounded search finished without finding what it looked for.
    #[error("search exhausted: {0}")]
    Exhausted(String),

    /// A malformed or mismatching sieve file.
    #[error("sieve file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
