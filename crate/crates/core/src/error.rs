//! Error type shared by the algebra layers.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum AlgebraError {
    /// Operands belong to different algebras (generator sets, profiles or
    /// structure constants disagree).
    #[error("algebra mismatch: {0}")]
    Mismatch(String),

    /// A truncated series ran out of trustworthy coefficients.
    #[error("window exhausted: {0}")]
    WindowExhausted(String),

    /// An element has no inverse in the working ring.
    #[error("not invertible: {0}")]
    NotInvertible(String),

    /// Structure constants failed validation (superskew or super-Jacobi).
    #[error("invalid structure constants: {0}")]
    InvalidStructure(String),

    /// A scenario or operand violates a stated precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An operator mapped a weight-space vector outside the space.
    #[error("restriction leaks outside the weight space: witness monomial {0}")]
    Leakage(String),
}

pub type Result<T> = std::result::Result<T, AlgebraError>;
