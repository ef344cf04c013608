use thiserror::Error;

/// Every failure mode of the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("group order {order} exceeds the cap of {cap}")]
    SizeCap { order: usize, cap: usize },

    #[error("invalid group parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown group kind {0:?}")]
    UnknownGroupKind(String),

    #[error("schema violation: {0}")]
    Schema(String),

    #[error("associativity fails for ({a}, {b}, {c}): (ab)c = {left} but a(bc) = {right}")]
    Associativity {
        a: usize,
        b: usize,
        c: usize,
        left: usize,
        right: usize,
    },

    #[error("no identity element in table")]
    MissingIdentity,

    #[error("element {0} has no inverse")]
    MissingInverse(usize),

    #[error("element index {index} out of range for group of order {order}")]
    ElementOutOfRange { index: usize, order: usize },

    #[error("group is nonabelian")]
    Nonabelian,

    #[error("operands belong to different groups ({0} vs {1})")]
    GroupMismatch(String, String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("measure is not a probability measure")]
    NotProbability,

    #[error("function is not in P1(G): {0}")]
    NotPositiveDefiniteUnit(String),

    #[error("level set {{x : sigma(x) = 1}} is not a subgroup; tolerance {0:e} is misconfigured")]
    LevelSetNotSubgroup(f64),

    #[error("factorization residual {residual:e} exceeds tolerance {tol:e}")]
    Residual { residual: f64, tol: f64 },

    #[error("subspace is not a unital *-algebra (defect {0:e})")]
    NotAnAlgebra(f64),

    #[error("no convergence after {iterations} steps (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("decomposition failed to converge")]
    Decomposition,

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
