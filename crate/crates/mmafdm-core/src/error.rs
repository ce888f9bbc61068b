//! Error type shared across the crate.

use core::fmt;

/// Errors reported by the baseband primitives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Vector/matrix dimensions do not agree.
    DimensionMismatch { expected: usize, got: usize },
    /// A parameter combination is outside the supported design space.
    InvalidParams(&'static str),
    /// An index (rank, pattern number, ...) is outside its valid range.
    IndexOutOfRange,
    /// A bit buffer has the wrong length for the requested operation.
    BitLengthMismatch { expected: usize, got: usize },
    /// Input matrix is not Hermitian within tolerance.
    NotHermitian,
    /// Iterative eigensolver failed to converge.
    NoConvergence,
    /// Function argument outside its mathematical domain.
    DomainError(&'static str),
    /// A decoded state violates the codec invariants (tampered or corrupt).
    InvalidState(&'static str),
    /// The exhaustive search space exceeds the configured budget.
    BudgetExceeded { candidates: u128, budget: u128 },
    /// The mode partition search could not attain its distance target.
    PartitionSearchFailed,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
            Error::IndexOutOfRange => write!(f, "index out of range"),
            Error::BitLengthMismatch { expected, got } => {
                write!(f, "bit length mismatch: expected {expected}, got {got}")
            }
            Error::NotHermitian => write!(f, "matrix is not Hermitian within tolerance"),
            Error::NoConvergence => write!(f, "eigensolver did not converge"),
            Error::DomainError(msg) => write!(f, "domain error: {msg}"),
            Error::InvalidState(msg) => write!(f, "invalid state: {msg}"),
            Error::BudgetExceeded { candidates, budget } => {
                write!(f, "search space of {candidates} candidates exceeds budget {budget}")
            }
            Error::PartitionSearchFailed => write!(f, "mode partition search failed"),
        }
    }
}

impl core::error::Error for Error {}
