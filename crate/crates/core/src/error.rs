use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown subgroup `{0}`; valid names: {1}")]
    UnknownGroup(String, String),
    #[error("{0} is a rotation subgroup; P+ and S-functions need a reflection")]
    NotReflectionGroup(String),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("inexact division, residual support {0:?}")]
    InexactDivision(Vec<(i64, i64)>),
    #[error("support exceeds cap of {0} terms")]
    SupportCap(usize),
    #[error("fusion decomposition failed: {0}")]
    Decomposition(String),
    #[error("graph radius {have} too small, need {need}")]
    RadiusTooSmall { have: i64, need: i64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("point ({0}, {1}) outside the joint spectrum")]
    OutsideDomain(String, String),
    #[error("{0} lies in the numerical boundary band")]
    OnBoundary(String),
    #[error("quadrature did not converge: estimate {value} with error {error}")]
    NoConvergence { value: f64, error: f64 },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
