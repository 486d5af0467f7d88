use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed term: {0}")]
    Structure(String),
    #[error("invalid point: {0}")]
    Point(String),
    #[error("invalid designator: {0}")]
    Designator(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("outside the supported scope: {0}")]
    Scope(String),
    #[error("valuation of zero is undefined")]
    ValuationOfZero,
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// An internal consistency check between two derivation paths failed.
    #[error("engine inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
