//! Conditional probability as map composition, in two engines that share one
//! geometry: a *graph* map pairs an input with its outcome, a *characteristic*
//! map splits on a predicate, and conditioning fills in the triangle between
//! them.
//!
//! The discrete engine works with finitely supported distributions over opaque
//! labels, with all weights kept as exact arbitrary-precision rationals.  The
//! operator engine works with finite-dimensional block-matrix algebras and
//! positive unital maps over complex floating point.  Both expose the same
//! pipeline: build the joint, read off the marginal, divide it back out, and
//! check the result by recomposing.

/// The crate version, embedded in reports so results can be traced back to
/// the code that produced them.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod bomb;
pub mod classical;
pub mod cstar;
pub mod dist;
pub mod error;
pub mod kleisli;
pub mod label;
pub mod predicate;
pub mod ratio;
pub mod set;

pub use classical::{condition, condition_ntest, joint_map, verify_triangle, ConditioningResult};
pub use cstar::{
    condition_param, condition_state, AlgebraElement, AlgebraShape, Effect, PUMap,
    QConditioningResult, State,
};
pub use dist::FiniteDistribution;
pub use error::{ClassicalError, ClassicalResult, CstarError, CstarResult};
pub use kleisli::{Component, KleisliMap};
pub use label::Label;
pub use predicate::{omega, subst, Predicate};
pub use ratio::{parse_rat, rat, rat_int, Rat};
pub use set::FiniteSet;
