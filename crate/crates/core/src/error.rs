use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operators do not commute (pair {0}, {1})")]
    NonCommuting(usize, usize),

    #[error("invalid root system: {0}")]
    InvalidRootSystem(String),

    #[error("weight {0:?} is not dominant integral")]
    NotDominant(Vec<i64>),

    #[error("Weyl group of order {order} exceeds the enumeration ceiling {ceiling}")]
    WeylCeiling { order: u128, ceiling: u128 },

    #[error("module of dimension {dim} exceeds the ceiling {ceiling}")]
    ModuleCeiling { dim: u128, ceiling: usize },

    #[error("weight space {weight:?} has dimension {dim}, expected 1")]
    NotExtreme { weight: Vec<i64>, dim: usize },

    #[error("invalid deformation data: {0}")]
    InvalidDeformation(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("refused: {0}")]
    Refused(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl From<crate::linalg::rational::ParseRationalError> for Error {
    fn from(e: crate::linalg::rational::ParseRationalError) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<crate::linalg::scalar::ParseScalarError> for Error {
    fn from(e: crate::linalg::scalar::ParseScalarError) -> Self {
        Error::Parse(e.to_string())
    }
}
