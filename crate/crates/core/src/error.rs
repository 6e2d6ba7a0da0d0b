use thiserror::Error;

use crate::rigidity::RigidityReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("encoding error: {0}")]
    Encoding(String),

    #[error("domain size must be at least 2, got {0}")]
    DomainTooSmall(usize),

    #[error("domain size mismatch: {left} vs {right}")]
    DomainMismatch { left: usize, right: usize },

    #[error("arity mismatch: expected {expected}, got {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("relation is empty")]
    EmptyRelation,

    #[error("ell = {ell} is out of range for k = {k} (need 1 <= ell <= k)")]
    EllOutOfRange { ell: usize, k: usize },

    #[error("capacity exceeded: {what} (limit {limit})")]
    Capacity { what: String, limit: String },

    #[error("tuple {0:?} is not injective")]
    NonInjective(Vec<usize>),

    #[error("trace assignment is not equivariant at {0:?}")]
    NotEquivariant(Vec<usize>),

    #[error("bound violated: {inequality}: {lhs} > {rhs}")]
    BoundViolated {
        inequality: &'static str,
        lhs: String,
        rhs: String,
    },

    #[error("construction did not verify: {0}")]
    ConstructionFailed(Box<RigidityReport>),

    #[error("function is a partial projection or a partial constant; no witness exists")]
    NoWitness,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed input: {0}")]
    Format(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
