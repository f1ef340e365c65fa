use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("division by the zero polynomial")]
    DivisionByZeroPolynomial,
    #[error("no real root below the requested bound")]
    NoRealRoot,
    #[error("polynomial degree {degree} exceeds the code length {n}")]
    DegreeExceedsLength { degree: usize, n: u32 },
    #[error("inner product {0} lies outside [-1, 1)")]
    OutOfRange(String),
    #[error("degenerate boundary: {0}")]
    Boundary(String),
    #[error("root multiplicity anomaly: {0}")]
    RootAnomaly(String),
    #[error("uncertified: {0}")]
    Uncertified(String),
    #[error("parameter j = {j} is outside {range}")]
    OutsideRange { j: String, range: &'static str },
    #[error("infeasible expansion: negative coefficients at degrees {0:?}")]
    Infeasible(Vec<usize>),
    #[error("singular linear system: {0}")]
    SingularSystem(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
