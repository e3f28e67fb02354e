use thiserror::Error;

/// Errors produced by the bound generators, the envelope geometry and the
/// code verifiers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parameter out of range: {0}")]
    ParameterRange(String),

    #[error("infeasible parameters: {0}")]
    Feasibility(String),

    #[error("refinement rejected at step {step}: {reason}")]
    Refinement { step: usize, reason: String },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("malformed code spec: {0}")]
    Spec(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
