use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("width mismatch: expected {expected} goods, got {got}")]
    WidthMismatch { expected: usize, got: usize },

    #[error("good {good} is already in the bundle")]
    GoodInBundle { good: usize },

    #[error("{what} limit exceeded: {requested} > {limit}")]
    LimitExceeded {
        what: &'static str,
        requested: u64,
        limit: u64,
    },

    #[error("allocation is not complete: unallocated goods remain")]
    IncompleteAllocation,

    #[error("allocation bundles are not pairwise disjoint")]
    OverlappingBundles,

    #[error("invalid valuation: {0}")]
    InvalidValuation(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("infeasible point for this local-search instance")]
    InfeasibleStart,

    #[error("reduction expects a {expected} instance, got {got}")]
    WrongDirection {
        expected: &'static str,
        got: &'static str,
    },

    #[error("solution does not have the structure guaranteed by the reduction: {0}")]
    MalformedSolution(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
