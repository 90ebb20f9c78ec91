use thiserror::Error;

/// Errors raised by the algebra kernels.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime in the supported range [2, 2^31 - 1]")]
    NotPrime(u64),
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u32, right: u32 },
    #[error("division by zero in F_{0}")]
    DivisionByZero(u32),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operation is undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not invariant under the group action")]
    NotInvariant,
    #[error("polynomial is not multihomogeneous of the requested multidegree")]
    NotMultihomogeneous,
    #[error("unmatched y-step at position {0}")]
    UnmatchedY(usize),
    #[error("path `{0}` is neither a bounded partial Dyck path nor an initial Dyck path")]
    NotInDomain(String),
    #[error("relation {0} did not expand to zero")]
    RelationFailed(String),
    #[error("degree mismatch: expected total degree {expected}, got {got}")]
    DegreeMismatch { expected: u32, got: u32 },
    #[error("component of dimension {dim} exceeds the size budget {limit}")]
    InfeasibleSize { dim: usize, limit: usize },
    #[error("time budget exhausted after completing degree {completed}")]
    BudgetExceeded { completed: u32 },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
