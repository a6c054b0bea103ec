use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("q = {0} is too small: the field size must exceed 3")]
    FieldTooSmall(u64),
    #[error("q = {0} is even: only odd characteristic is supported")]
    FieldEven(u64),
    #[error("q = {0} is not prime")]
    FieldNotPrime(u64),
    #[error("{value} does not generate the multiplicative group of F_{q}")]
    NotAGenerator { value: u64, q: u32 },
    #[error("polynomials belong to different fields (q = {0} and q = {1})")]
    FieldMismatch(u32, u32),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial {0} is not monic")]
    NotMonic(String),
    #[error("polynomial {0} is not irreducible")]
    NotIrreducible(String),
    #[error("polynomial {0} is not square-free")]
    NotSquarefree(String),
    #[error("cannot parse polynomial {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("s = {0} is at or left of the pole of the zeta function; need s >= 2")]
    Pole(i64),
    #[error("{needed} discriminants exceed the exhaustive budget of {budget}; rerun with sampling")]
    BudgetExceeded { needed: u64, budget: u64 },
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
