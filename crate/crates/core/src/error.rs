use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("coefficient {value} is not defined modulo {prime}")]
    NotReducible { value: String, prime: u64 },

    #[error("{0} is not a prime in the supported range")]
    NotPrime(u64),

    #[error("prime {prime} must exceed the degree {n}")]
    PrimeTooSmall { prime: u64, n: usize },

    #[error("at least two primes are required, got {0}")]
    TooFewPrimes(usize),

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error(
        "budget exceeded for degree {n}: needs {rows} rows x {cols} columns \
         (limits {max_rows} x {max_cols}); pass an override to proceed"
    )]
    BudgetExceeded {
        n: usize,
        rows: u128,
        cols: u128,
        max_rows: u128,
        max_cols: u128,
    },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("multiplicity of {lambda} is {value}, not a nonnegative integer")]
    BadMultiplicity { lambda: String, value: String },

    #[error("results disagree across primes: {0}")]
    PrimeDisagreement(String),

    #[error("exponent methods disagree: {0}")]
    MethodDisagreement(String),

    #[error("point is outside the feasible region: {0}")]
    Infeasible(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
