use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("integer overflow in machine-word matrix arithmetic")]
    Overflow,
    #[error("unsupported ring: {0}")]
    UnsupportedRing(String),
    #[error("rings differ: {0}")]
    RingMismatch(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("map is not well defined: {0}")]
    IllDefinedMap(String),
    #[error("map is not a monomorphism")]
    NotMono,
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("not a chain map: {0}")]
    NotChainMap(String),
    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),
    #[error("hypothesis not established: {0}")]
    Hypothesis(String),
    #[error("unsolvable constrained lift: {0}")]
    Unsolvable(String),
    #[error("internal check failed: {0}")]
    Inconsistent(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
