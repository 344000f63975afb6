//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by matrix construction, linear algebra, and the calculus operations.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// A matrix entry was NaN or infinite.
    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    /// Operand shapes are incompatible with the requested operation.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A resolvent pivot is singular or numerically too ill-conditioned to trust.
    #[error("singular pivot: condition number exceeds the configured cap")]
    SingularPivot,

    /// The elimination system of the characteristic-function relation is singular.
    #[error("singular elimination system")]
    SingularSystem,

    /// A matrix expected to be unitary fails the unitarity check.
    #[error("matrix is not unitary (defect {defect:.3e} exceeds tolerance)")]
    NotUnitary { defect: f64 },

    /// A matrix expected to preserve the indefinite form fails the check.
    #[error("matrix is not pseudo-unitary (defect {defect:.3e} exceeds tolerance)")]
    NotPseudoUnitary { defect: f64 },

    /// A point expected strictly inside the matrix ball has norm >= 1.
    #[error("point is not in the open matrix ball (norm {norm})")]
    NotInterior { norm: f64 },

    /// A point lies outside the closed matrix ball.
    #[error("point is outside the closed matrix ball (norm {norm})")]
    NotInBall { norm: f64 },

    /// A point expected on the boundary of the matrix ball is interior.
    #[error("point is not on the boundary of the matrix ball (norm {norm})")]
    NotOnBoundary { norm: f64 },

    /// Composition is singular both directly and at every attempted probe point.
    #[error("composition pivot singular at the center and at the probe point")]
    CompositionSingular,

    /// A characteristic function expected block-diagonal is not.
    #[error("characteristic function is not block-diagonal (off-block mass {defect:.3e})")]
    NotBlockDiagonal { defect: f64 },

    /// Splitting failed for both the plain and the twisted selector.
    #[error("split pivot singular for both the plain and the twisted selector")]
    SplitSingular,

    /// Restriction failed: the function is singular everywhere on the component probed.
    #[error("restriction pivot singular on the boundary component")]
    SingularOnComponent,

    /// The sampled image does not lie in a single boundary component of the stated corank.
    #[error("image does not lie in one boundary component (expected corank {expected})")]
    ImageNotInComponent { expected: usize },

    /// A computed dimension disagrees with the predicted one.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A signature is not weakly decreasing or has negative parts.
    #[error("invalid signature: parts must be weakly decreasing and non-negative")]
    InvalidSignature,

    /// A tolerance configuration has non-positive or nonsensical fields.
    #[error("invalid tolerance configuration")]
    InvalidTolerance,
}
