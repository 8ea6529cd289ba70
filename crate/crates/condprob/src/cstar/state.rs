//! States: positive unital maps into the scalars, i.e. expectation
//! functionals.
//!
//! A [`State`] is the operator-algebraic face of a probability
//! distribution: it assigns each observable its expectation value, and each
//! effect a probability.  States built from density elements pair by the
//! trace, `a ↦ Σᵢ tr(ρᵢ aᵢ)` over blocks.  Evolution is Heisenberg-style:
//! a processing stage `s : A → B` pulls a state on `A` back along itself to
//! a state on `B`'s description of the past — concretely, precomposition.

use super::element::AlgebraElement;
use super::pumap::PUMap;
use super::shape::AlgebraShape;
use super::{C, TOL_POS};
use crate::error::{CstarError, CstarResult};
use serde::{Deserialize, Serialize};

/// How far a density's trace may stray from one.
const TOL_TRACE: f64 = 1e-9;

/// An expectation functional on an algebra.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PUMap", into = "PUMap")]
pub struct State {
    map: PUMap,
}

impl TryFrom<PUMap> for State {
    type Error = CstarError;

    fn try_from(map: PUMap) -> CstarResult<Self> {
        State::from_map(map)
    }
}

impl From<State> for PUMap {
    fn from(state: State) -> PUMap {
        state.map
    }
}

impl State {
    /// Builds the trace-pairing state of a density element: positive, with
    /// unit trace summed across blocks.
    pub fn from_density(rho: &AlgebraElement) -> CstarResult<Self> {
        if !rho.is_positive(TOL_POS) {
            return Err(CstarError::NotPositive {
                min_eigenvalue: rho.min_eigenvalue().unwrap_or(f64::NEG_INFINITY),
            });
        }
        let trace = rho.trace();
        if (trace - C::new(1.0, 0.0)).norm() > TOL_TRACE {
            return Err(CstarError::ShapeMismatch(
                "density must have unit trace across all blocks",
            ));
        }
        let shape = rho.shape().clone();
        let scalars = AlgebraShape::scalars(1).expect("one block");
        let map = PUMap::from_fn(&shape, &scalars, |a| {
            let value: C = rho
                .blocks()
                .iter()
                .zip(a.blocks())
                .map(|(r, x)| (r * x).trace())
                .sum();
            AlgebraElement::from_center_values(&scalars, &[value]).expect("one scalar")
        })?;
        Ok(State { map })
    }

    /// Wraps a scalar-valued map as a state.  Positivity of untrusted maps
    /// should be probed with [`PUMap::validate`] before trusting the
    /// probabilities.
    pub fn from_map(map: PUMap) -> CstarResult<Self> {
        if map.target().blocks() != [1] {
            return Err(CstarError::ShapeMismatch("state target must be the scalars"));
        }
        Ok(State { map })
    }

    /// The algebra this state evaluates.
    pub fn shape(&self) -> &AlgebraShape {
        self.map.source()
    }

    /// The underlying scalar-valued map.
    pub fn as_map(&self) -> &PUMap {
        &self.map
    }

    /// Expectation value of an observable.
    pub fn expect(&self, a: &AlgebraElement) -> CstarResult<C> {
        let image = self.map.apply(a)?;
        Ok(image.block(0)[(0, 0)])
    }

    /// Probability of an effect: the real part of its expectation (the
    /// imaginary part of an effect's expectation vanishes up to rounding).
    pub fn prob(&self, e: &super::effect::Effect) -> CstarResult<f64> {
        Ok(self.expect(e.element())?.re)
    }

    /// Pulls the state back along a processing stage: observables of the
    /// stage's source are first pushed through the stage, then evaluated.
    pub fn evolve(&self, stage: &PUMap) -> CstarResult<State> {
        Ok(State {
            map: PUMap::compose(&self.map, stage)?,
        })
    }
}
