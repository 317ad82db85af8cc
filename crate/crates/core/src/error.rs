use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("division by zero")]
    ZeroDivision,
    #[error("element is not a unit: {0}")]
    NonUnit(String),
    #[error("cannot parse polynomial {0:?}")]
    Parse(String),
    #[error("argument outside the domain of convergence: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("series does not converge: {0}")]
    Divergence(String),
    #[error("precision {prec} needs more than {cap} logarithm terms")]
    PrecisionUnreachable { prec: i64, cap: usize },
    #[error("coefficients must lie in F_q")]
    NonConstant,
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
