//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus 0x{modulus:x} is not an irreducible polynomial of degree {degree} over GF(2)")]
    BadModulus { modulus: u64, degree: u32 },
    #[error("extension degree {0} is out of the supported range 2..=15")]
    BadDegree(u32),
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("division by zero")]
    DivisionByZero,
    #[error("element {value} is not a canonical representative in a field of order {q}")]
    NotCanonical { value: u64, q: u64 },
    #[error("operation requires an extension field")]
    ExtensionFieldRequired,
    #[error("operation requires a prime field")]
    PrimeFieldRequired,
    #[error("matrix has no nonzero rows")]
    ZeroMatrix,
    #[error("matrix is empty")]
    EmptyMatrix,
    #[error("parity-check matrix has a trivial nullspace (code would be empty)")]
    TrivialCode,
    #[error("expected a vector of length {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("enumeration budget exceeded: {0} messages required")]
    BudgetExceeded(u128),
    #[error("delta must lie in (0.5, 1], got {0}")]
    BadDelta(f64),
    #[error("block size {beta} is invalid for rank {rank}")]
    BadBeta { beta: usize, rank: usize },
    #[error("basis has no rows")]
    EmptyBasis,
    #[error("Gram-Schmidt data is stale or degenerate")]
    InvalidGso,
    #[error("scaling constant must be at least 1")]
    BadScale,
    #[error("generator matrix is not in systematic form")]
    NotSystematic,
    #[error("lattice vector is not divisible by the scaling constant (corrupted basis)")]
    CorruptedEmbedding,
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
    #[error("field specification {0:?} is not recognized (expected e.g. \"2\", \"3\", \"2^6:0x43\")")]
    BadFieldSpec(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Unsupported(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
