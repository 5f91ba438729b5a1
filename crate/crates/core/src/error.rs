use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input must be positive, got 0")]
    Zero,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("the Legendre symbol needs an odd prime modulus, got {0}")]
    EvenModulus(u64),
    #[error("gcd({a}, {n}) != 1")]
    NotCoprime { a: u64, n: u64 },
    #[error("d must be square-free, got {0}")]
    NotSquareFree(i64),
    #[error("d must not be 0 or 1, got {0}")]
    DegenerateQuadratic(i64),
    #[error("prime {p} divides {n}")]
    PrimeDivides { p: u64, n: u64 },
    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),
    #[error("invalid field `{0}`: expected cyclo:<n> or quad:<d>")]
    FieldSyntax(String),
    #[error("{what} disagree for n={n}, q={q}")]
    AlgorithmMismatch { what: &'static str, n: u64, q: u128 },
}
