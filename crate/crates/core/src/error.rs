use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Two operands carry incompatible parameters (different `d`, `n` or `t`).
    #[error("parameter mismatch: {0}")]
    Parameter(String),
    /// A linear system did not have the expected rank.
    #[error("degenerate system: {0}")]
    Degenerate(String),
    /// A computed object violated one of its defining identities.
    #[error("invariant violated: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
