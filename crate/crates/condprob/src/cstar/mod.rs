//! Finite-dimensional operator algebras and positive unital maps.
//!
//! An algebra here is a finite direct sum of full complex matrix blocks,
//! described by its [`AlgebraShape`] (the list of block dimensions).  This
//! covers every finite-dimensional C*-algebra: `[n]` is the full `n × n`
//! matrix algebra, `[1, 1, …]` is a commutative algebra of tuples, and mixed
//! shapes describe hybrid classical/quantum systems.  [`AlgebraElement`]s are
//! block matrices, [`Effect`]s are elements with spectrum in `[0, 1]`, and
//! [`PUMap`]s are positive unital linear maps between algebras — the
//! probabilistic maps of the operator world, composed in the same direction
//! as the exact engine's stochastic maps.
//!
//! Numerical policy: all spectral checks go through Hermitian
//! eigendecomposition with the tolerances collected below; elements are
//! vectorized block-by-block in shape order, column-major within each block
//! (see [`VEC_CONVENTION`]), and a map *is* its matrix in that basis.

mod effect;
mod element;
mod pumap;
mod quantum;
mod shape;
mod state;

pub use effect::Effect;
pub use element::AlgebraElement;
pub use pumap::{
    center_compression, center_embedding, center_multiplication, char_map, coprojection_first,
    coprojection_second, direct_sum_map, graph, ungraph, PUMap, ValidationReport,
};
pub use quantum::{
    condition_param, condition_state, joint_map_q, luders_oracle, QConditioningResult,
    StateConditioningResult,
};
pub use shape::AlgebraShape;
pub use state::State;

/// Complex scalar used throughout the operator engine.
pub type C = nalgebra::Complex<f64>;

/// Identifier of the element-vectorization convention baked into every
/// serialized map matrix: blocks in shape order, column-major inside a block.
pub const VEC_CONVENTION: &str = "blocks-in-shape-order/column-major/v1";

/// Hermiticity tolerance: `a` counts as Hermitian when `‖a − a*‖ ≤ TOL_HERM`.
pub const TOL_HERM: f64 = 1e-9;

/// Positivity tolerance: eigenvalues in `(−TOL_POS, 0)` are treated as zero;
/// anything at or below `−TOL_POS` disqualifies the element.
pub const TOL_POS: f64 = 1e-9;

/// Relative accuracy expected of the spectral functional calculus
/// (square roots and their inverses).
pub const TOL_FC: f64 = 1e-10;

/// Invertibility threshold: a positive element with an eigenvalue at or
/// below this cannot be inverted (or inverse-square-rooted).
pub const INV_TOL: f64 = 1e-9;

/// Unitality tolerance enforced when a map is constructed from raw data.
pub const TOL_UNITAL: f64 = 1e-9;

/// Acceptable residual when recomposing a conditioning triangle.
pub const TOL_TRIANGLE: f64 = 1e-8;
