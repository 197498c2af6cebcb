use thiserror::Error;

use crate::anf::AnfParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field element does not belong to this field context")]
    ContextMismatch,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("polynomial {poly} has degree {found:?}, expected {expected}")]
    DegreeMismatch {
        poly: String,
        expected: u32,
        found: Option<usize>,
    },
    #[error("modulus {0} must have constant term 1")]
    ZeroConstantTerm(String),
    #[error("factorization does not multiply out to 2^{length} - 1")]
    FactorizationMismatch { length: u32 },
    #[error("polynomial {poly} is not primitive of degree {length}")]
    NotPrimitive { poly: String, length: u32 },
    #[error("field context has no verified primitive modulus")]
    UnverifiedContext,
    #[error("L = {length} exceeds the supported maximum {max} for {what}")]
    LengthTooLarge {
        length: u32,
        max: u32,
        what: &'static str,
    },
    #[error("LFSR state must be nonzero and fit in {length} bits")]
    InvalidState { length: u32 },
    #[error("order k = {order} is outside 1..={length}")]
    OrderOutOfRange { length: u32, order: u32 },
    #[error("exponent {exponent} is outside [1, 2^{length} - 2]")]
    ExponentOutOfRange { length: u32, exponent: u64 },
    #[error("length mismatch: expected {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("filter space has {count} functions, above the enumeration cap {cap}")]
    EnumerationCap { count: String, cap: u64 },
    #[error("exact evaluation needs about {bits} bits, above the budget of {budget}; use the log-domain report")]
    ExactInfeasible { bits: String, budget: u64 },
    #[error(transparent)]
    Anf(#[from] AnfParseError),
    #[error("invalid hexadecimal polynomial {0:?}")]
    InvalidHex(String),
    #[error("polynomial table, line {line}: {message}")]
    Table { line: usize, message: String },
    #[error("no polynomial table entry for L = {0}")]
    NoTableEntry(u32),
    #[error("empty bit sequence")]
    EmptySequence,
    #[error("an empty spectrum has no period")]
    EmptySpectrum,
    #[error("invalid spectral line at leader {leader}: {reason}")]
    InvalidLine { leader: u64, reason: &'static str },
    #[error("spectrum does not reconstruct to a binary value at index {index}")]
    NotBinary { index: u64 },
    #[error("number of trials must be at least 1")]
    ZeroTrials,
    #[error("parameter mismatch: summary is for (L, k) = ({0}, {1}), report is for ({2}, {3})")]
    ParameterMismatch(u32, u32, u32, u32),
    #[error("cannot decide the sign of {0} at the working precision")]
    Undecidable(&'static str),
    #[error("{0}")]
    Io(String),
}
