use thiserror::Error;

/// Typed failures shared across the crate.
///
/// Search operations whose absence of a result is meaningful return
/// `Option`/outcome enums instead; `Error` is reserved for contract
/// violations, infeasible inputs, and refused (resource-capped) computations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("infeasible system")]
    InfeasibleSystem,

    #[error("weight is not admissible: the program has no finite optimum")]
    InadmissibleWeight,

    #[error("usage error: {0}")]
    Usage(String),

    #[error("resource limit exceeded: {limit} (cap {cap})")]
    ResourceLimit { limit: &'static str, cap: u64 },

    #[error("degenerate clutter: {0}")]
    DegenerateClutter(&'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    pub fn dim(msg: impl Into<String>) -> Self {
        Error::Dimension(msg.into())
    }
}
