//! Error type shared by all modules.

use alloc::string::String;
use core::fmt;
use num_bigint::BigInt;

/// Errors surfaced by the library.
///
/// Factorization and search failures are always loud: an operation whose
/// result would depend on an incomplete factorization returns
/// [`Error::FactorizationIncomplete`] or [`Error::BudgetExceeded`] instead of
/// a partial answer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// The defining polynomial factors over the rationals.
    NotIrreducible,
    /// Maximality of the order could not be proven; carries the offending prime.
    BasisNotMaximal(BigInt),
    /// A supplied integral basis failed verification.
    BasisInconsistent(String),
    /// The rational prime divides the power-basis index and no usable basis
    /// makes the splitting computation valid.
    IndexDivisorUnsupported(BigInt),
    /// Interval refinement hit the precision cap without separating values.
    PrecisionExhausted,
    /// Integer factorization exhausted its budget; carries the unfactored part.
    FactorizationIncomplete(BigInt),
    /// A size or iteration budget was exceeded before completion.
    BudgetExceeded(String),
    /// Relation search ended before the class group stabilised.
    RelationSearchBudgetExceeded,
    /// An operation requiring a nonzero ideal received the zero ideal.
    ZeroIdeal,
    /// An operation requiring a nonzero element received zero.
    ZeroInput,
    /// Fewer (or more) embeddings than the degree were supplied.
    EmbeddingCountMismatch { expected: usize, got: usize },
    /// No candidate discriminant within the requested bound.
    NoCandidateWithinBound,
    /// Structured-text input failed to parse.
    ParseError(String),
    /// A certificate digest did not match its canonical serialization.
    DigestMismatch,
    /// Semantically invalid input (wrong signature, odd ramification set, ...).
    InvalidInput(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotIrreducible => write!(f, "polynomial is not irreducible over Q"),
            Error::BasisNotMaximal(p) => {
                write!(f, "maximality not proven at prime {p}")
            }
            Error::BasisInconsistent(m) => write!(f, "integral basis inconsistent: {m}"),
            Error::IndexDivisorUnsupported(p) => {
                write!(f, "prime {p} divides the power-basis index; unsupported")
            }
            Error::PrecisionExhausted => write!(f, "interval precision cap exhausted"),
            Error::FactorizationIncomplete(n) => {
                write!(f, "factorization incomplete; unfactored part {n}")
            }
            Error::BudgetExceeded(m) => write!(f, "budget exceeded: {m}"),
            Error::RelationSearchBudgetExceeded => {
                write!(f, "class group relation search budget exceeded")
            }
            Error::ZeroIdeal => write!(f, "zero ideal"),
            Error::ZeroInput => write!(f, "zero input"),
            Error::EmbeddingCountMismatch { expected, got } => {
                write!(f, "expected {expected} verified embeddings, got {got}")
            }
            Error::NoCandidateWithinBound => write!(f, "no candidate within bound"),
            Error::ParseError(m) => write!(f, "parse error: {m}"),
            Error::DigestMismatch => write!(f, "certificate digest mismatch"),
            Error::InvalidInput(m) => write!(f, "invalid input: {m}"),
        }
    }
}
