//! Error types for the two conditioning engines.
//!
//! The exact engine ([`ClassicalError`]) reports structural problems —
//! unknown labels, weights that do not normalize, partial sums that leave
//! `[0, 1]` — all of which are detected exactly on rational arithmetic.  The
//! operator engine ([`CstarError`]) reports numerical-tolerance violations:
//! spectra that leave the positive cone, marginals too close to singular to
//! divide out, and states that assign a conditioning effect probability 0
//! or 1.

use crate::label::Label;
use crate::ratio::Rat;
use thiserror::Error;

/// Errors raised by the exact rational engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassicalError {
    /// A label was used with a set that does not contain it.
    #[error("label `{0}` is not an element of the set")]
    UnknownLabel(Label),

    /// A set was constructed with a repeated element.
    #[error("label `{0}` appears more than once in the set")]
    DuplicateLabel(Label),

    /// Distribution weights must be non-negative and sum to exactly 1.
    #[error("weights sum to {0}, expected exactly 1")]
    NotNormalized(Rat),

    /// A single weight or predicate value escaped its allowed interval.
    #[error("value {value} at `{label}` is outside [0, 1]")]
    ValueOutOfRange { label: Label, value: Rat },

    /// A scalar used to rescale a predicate must lie in `[0, 1]`.
    #[error("scalar {0} is outside [0, 1]")]
    ScalarOutOfRange(Rat),

    /// The partial sum of two predicates exceeded 1 somewhere.
    #[error("UndefinedSum: predicate sum exceeds 1 at `{0}`")]
    UndefinedSum(Label),

    /// A family of predicates claimed to be an n-test does not sum to 1.
    #[error("NotATest: test predicates do not sum to 1 at `{0}`")]
    NotATest(Label),

    /// Two sets that had to coincide for an operation did not.
    #[error("mismatched sets in {0}")]
    SetMismatch(&'static str),

    /// An operation expected a set whose elements are pairs.
    #[error("the set is not a tensor: `{0}` is not a pair label")]
    NotATensor(Label),

    /// `ungraph` was applied to a map that does not fix its first coordinate.
    #[error("the map is not a graph: its first marginal is not the identity")]
    NotAGraph,

    /// A uniform fallback row was requested over an empty set.
    #[error("cannot form a distribution over an empty set")]
    EmptySet,
}

/// Errors raised by the operator-algebraic engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CstarError {
    /// An algebra shape must list at least one block of positive dimension.
    #[error("algebra shape must list positive block dimensions")]
    BadShape,

    /// Two algebra shapes (or matrix dimensions) that had to coincide did not.
    #[error("shape mismatch in {0}")]
    ShapeMismatch(&'static str),

    /// An element expected to be Hermitian was not, within tolerance.
    #[error("element is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    /// An element expected to be positive has an eigenvalue below tolerance.
    #[error("element is not positive (minimum eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    /// A positive element had no inverse square root within tolerance.
    #[error("element is not invertible (minimum eigenvalue {min_eigenvalue:.3e})")]
    NotInvertible { min_eigenvalue: f64 },

    /// An element expected to be an effect has spectrum outside `[0, 1]`.
    #[error("element is not an effect (spectrum [{min:.6}, {max:.6}])")]
    NotAnEffect { min: f64, max: f64 },

    /// A map expected to be unital does not send 1 to 1 within tolerance.
    #[error("map is not unital (defect {defect:.3e})")]
    NotUnital { defect: f64 },

    /// The marginal of the conditioning effect is too close to singular.
    #[error("MarginalNotInvertible: marginal effect has minimum eigenvalue {min_eigenvalue:.3e}")]
    MarginalNotInvertible { min_eigenvalue: f64 },

    /// A state assigns the conditioning effect probability 0 or 1.
    #[error("DegenerateEffect: state assigns the effect probability {probability}")]
    DegenerateEffect { probability: f64 },
}

/// Result alias for the exact rational engine.
pub type ClassicalResult<T> = std::result::Result<T, ClassicalError>;

/// Result alias for the operator-algebraic engine.
pub type CstarResult<T> = std::result::Result<T, CstarError>;
