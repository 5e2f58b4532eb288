use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid measure index {0}: the state space has diagonals {{0}} ∪ {{2, 3, ...}}")]
    InvalidIndex(u64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("scale exponent {gamma} lies on a window endpoint or outside (0, 1/2)")]
    Endpoint { gamma: f64 },

    #[error("window set must contain at least one interval")]
    EmptyWindowSet,

    #[error("certificate bracket is empty at n = {n}; smallest usable horizon is {min_usable_n}")]
    BracketEmpty { n: u64, min_usable_n: u64 },

    #[error("requested precision is unreachable: {0}")]
    UnreachablePrecision(String),
}

pub type Result<T> = std::result::Result<T, Error>;
