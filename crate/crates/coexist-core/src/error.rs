//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by matrix, effect, and decomposition operations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A matrix violated Hermitian symmetry beyond tolerance.
    #[error("matrix is not Hermitian: max |M - M*| entry {0:.3e}")]
    NonHermitian(f64),

    /// An operator's spectrum left [0, 1]; carries the offending eigenvalue.
    #[error("operator is not an effect: eigenvalue {0} outside [0, 1]")]
    NotAnEffect(f64),

    /// An operator expected to be a projection has an eigenvalue away from {0, 1}.
    #[error("operator is not a projection: eigenvalue {0} away from {{0, 1}}")]
    NotAProjection(f64),

    /// Operands of different dimensions were combined.
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    /// An angle eigenvalue collided with 0 or pi inside the noncommutative
    /// subspace, which signals a tolerance failure in the decomposition.
    #[error("degenerate angle: h = {0} within tolerance of {{0, 1}} inside the commutator support")]
    DegenerateAngle(f64),

    /// An operator is not a member of the two-projection algebra; carries the
    /// largest entry violating the block structure.
    #[error("operator is not in the two-projection algebra: max off-block entry {0:.3e}")]
    NotInAlgebra(f64),

    /// A block function does not match the decomposition it is applied to.
    #[error("block function shape mismatch: {0}")]
    ShapeMismatch(String),

    /// The radicand of the coexistence function was negative beyond noise,
    /// which signals invalid (non-effect) inputs.
    #[error("negative radicand {0:.3e} in coexistence function; inputs are not valid effects")]
    NegativeRadicand(f64),

    /// A structural precondition of a simplified formula does not hold.
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    /// A rank-1 fast path was invoked on a projection of higher rank.
    #[error("rank violation: expected rank 1, got rank {0}")]
    RankViolation(usize),

    /// A spectrum description was empty or left its admissible range.
    #[error("invalid range: {0}")]
    InvalidRange(String),

    /// The iterative eigensolver failed to converge.
    #[error("eigensolver failed to converge for dimension {0}")]
    EigFailed(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
