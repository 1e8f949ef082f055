use alloc::string::String;

use crate::validation::ValidationReport;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(ValidationReport),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("vector has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("solution is not feasible for the benchmark constraints: {0}")]
    Infeasible(ValidationReport),

    #[error("simplex exceeded {0} iterations")]
    IterationLimit(usize),

    #[error("malformed LP: {0}")]
    MalformedLp(String),

    #[error("exact evaluation needs about {work} steps, above the limit of {limit}")]
    TooLarge { work: u128, limit: u128 },

    #[error("unknown group label `{0}`")]
    UnknownGroup(String),

    #[error("no trip records left after filtering")]
    EmptyAfterFiltering,
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
