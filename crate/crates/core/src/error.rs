use thiserror::Error;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("denominator must be positive")]
    ZeroDenominator,
    #[error("{num}/{den} is not in lowest terms")]
    NotCoprime { num: String, den: String },
    #[error("{num}/{den} lies outside [0, 1]")]
    OutOfRange { num: String, den: String },
    #[error("partial quotient must be at least 1 (got 0 at position {0})")]
    ZeroQuotient(usize),
    #[error("partial quotient does not fit in 64 bits")]
    QuotientOverflow,
    #[error("empty expansion has no matrix (the empty product is the identity)")]
    EmptyExpansion,
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("modulus {0} is outside the supported range")]
    ModulusOutOfRange(u64),
    #[error("moduli differ: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("determinant of ({a} {b} | {c} {d}) is not +-1 mod {p}")]
    NotUnimodular { a: u32, b: u32, c: u32, d: u32, p: u32 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("enumeration would exceed the cap of {cap} members")]
    ResourceCap { cap: u64 },
    #[error("counter overflow")]
    CountOverflow,
    #[error("regression is degenerate: all counts are equal")]
    DegenerateRegression,
    #[error("the set is empty")]
    EmptySet,
    #[error("element is not regular (trace 0 or +-2)")]
    NotRegular,
    #[error("element lies in the Borel subgroup")]
    InBorel,
}

pub type Result<T> = std::result::Result<T, Error>;
