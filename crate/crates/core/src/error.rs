use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field size cap exceeded: {0}")]
    FieldCap(String),
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("wild ramification out of modeled scope: gcd(m, q) > 1 (m = {m}, characteristic {p})")]
    Wild { m: usize, p: u64 },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("not a monic irreducible polynomial: {0}")]
    Reducible(String),
    #[error("unsupported divisor: {0}")]
    UnsupportedDivisor(String),
    #[error("tuple has no nonzero coordinate")]
    ZeroTuple,
    #[error("internal precision cap breached: {0}")]
    PrecisionCap(String),
    #[error("enumeration cap exceeded: {0}")]
    EnumerationCap(String),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("membership precondition violated: {0}")]
    NotInSpace(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}
