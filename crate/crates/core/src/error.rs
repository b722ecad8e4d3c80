use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("constraint violated: {0}")]
    ConstraintViolation(String),

    #[error("search space too large: {what} exceeds the cap of {cap}")]
    SearchSpaceTooLarge { what: String, cap: u64 },

    #[error("invalid helper set: {0}")]
    InvalidHelperSet(String),

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("infeasible: no alpha reaches the file size with beta = {beta}")]
    InfeasibleBeta { beta: String },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
