//! Error type shared by all modules of the library.

use num_complex::Complex64;
use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input matrix or scalar contained `NaN` or an infinity.
    #[error("input contains non-finite entries")]
    NonFinite,
    /// A square matrix was required.
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare {
        /// Row count of the offending matrix.
        rows: usize,
        /// Column count of the offending matrix.
        cols: usize,
    },
    /// Two operands have incompatible shapes.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    /// A matrix that must be Hermitian is not, within `tol_herm`.
    #[error("matrix is not Hermitian within tolerance: {0}")]
    NotHermitian(String),
    /// A tolerance configuration contains a non-positive entry.
    #[error("invalid tolerance configuration: {0}")]
    InvalidTolerance(String),
    /// The direct-sum precondition of a generalized inverse failed.
    #[error("direct-sum condition violated: {0}")]
    DirectSum(String),
    /// A computation needs more moments than the sequence provides.
    #[error("need moments up to s_{needed}, but the sequence ends at s_{available}")]
    InsufficientMoments {
        /// Largest moment index required.
        needed: usize,
        /// Largest moment index available.
        available: usize,
    },
    /// A moment sequence without any entries was supplied.
    #[error("moment sequence is empty")]
    EmptySequence,
    /// The sequence does not admit the requested extension.
    #[error("sequence is not extendable: {0}")]
    NotExtendable(String),
    /// The sequence fails a class-membership precondition.
    #[error("sequence is outside the required class: {0}")]
    NotInClass(String),
    /// A point on the real axis was given where a non-real point is needed.
    #[error("point {0} lies on the real axis")]
    RealPoint(Complex64),
    /// A point on the slit `[alpha, inf)` was given.
    #[error("point {0} lies on the slit [alpha, inf)")]
    OnSlit(Complex64),
    /// A matrix that must be inverted at a point is singular there.
    #[error("matrix is singular at z = {0}")]
    SingularAt(Complex64),
    /// A constant matrix that must be inverted is singular.
    #[error("matrix is singular: {0}")]
    Singular(String),
    /// An evaluation grid without points was supplied.
    #[error("evaluation grid is empty")]
    EmptyGrid,
    /// An operation was called for the wrong degeneracy case.
    #[error("wrong degeneracy case: {0}")]
    WrongCase(String),
    /// A measure violates its invariants.
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),
    /// A parameter pair violates its invariants.
    #[error("invalid parameter pair: {0}")]
    InvalidPair(String),
}
