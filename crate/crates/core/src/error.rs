use thiserror::Error;

/// Errors raised by the arithmetic, curve and elimination layers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("zero polynomial passed to {0}")]
    ZeroPolynomial(&'static str),
    #[error("degree {degree} exceeds the resultant cap of {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("quotient ring modulus mismatch")]
    ModulusMismatch,
    #[error("curve is singular over F_{0}")]
    SingularCurve(u64),
    #[error("prime {0} divides 70 and cannot be used with the Frey models")]
    UnusablePrime(u64),
    #[error("kappa must be one of 1, 2, 5, 10 (got {0})")]
    BadKappa(u64),
    #[error("square class test inconclusive: no split prime found below {0}")]
    Inconclusive(u64),
    #[error("missing a_{p} for newform {label}")]
    DataGap { label: String, p: u64 },
    #[error("schema error in {location}: {message}")]
    Schema { location: String, message: String },
    #[error("io error on {path}: {message}")]
    Io { path: String, message: String },
    #[error("remote fetch failed: {0}")]
    Remote(String),
}

pub type Result<T> = std::result::Result<T, Error>;
