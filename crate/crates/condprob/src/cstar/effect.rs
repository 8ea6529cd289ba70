//! Effects: the operator-algebra analogue of fuzzy predicates.

use super::element::AlgebraElement;
use super::shape::AlgebraShape;
use super::TOL_POS;
use crate::error::{CstarError, CstarResult};
use serde::{Deserialize, Serialize};

/// A Hermitian element with spectrum in `[0, 1]` (within [`TOL_POS`]):
/// the operator version of a `[0, 1]`-valued predicate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "AlgebraElement", into = "AlgebraElement")]
pub struct Effect {
    element: AlgebraElement,
}

impl Effect {
    /// Validates an element as an effect: Hermitian with spectrum inside
    /// `[−TOL_POS, 1 + TOL_POS]`.
    pub fn new(element: AlgebraElement) -> CstarResult<Self> {
        let (min, max) = element.spectral_range()?;
        if min < -TOL_POS || max > 1.0 + TOL_POS {
            return Err(CstarError::NotAnEffect { min, max });
        }
        Ok(Effect { element })
    }

    /// The always-true effect `1`.
    pub fn unit(shape: &AlgebraShape) -> Self {
        Effect {
            element: AlgebraElement::unit(shape),
        }
    }

    /// The always-false effect `0`.
    pub fn zero(shape: &AlgebraShape) -> Self {
        Effect {
            element: AlgebraElement::zeros(shape),
        }
    }

    /// The sharp effect on `A ⊕ A` that is 1 on the first copy and 0 on the
    /// second — the operator analogue of the left-copy indicator.
    pub fn omega(shape: &AlgebraShape) -> Self {
        Effect {
            element: AlgebraElement::unit(shape).direct_sum(&AlgebraElement::zeros(shape)),
        }
    }

    /// The underlying element.
    pub fn element(&self) -> &AlgebraElement {
        &self.element
    }

    /// The shape this effect lives in.
    pub fn shape(&self) -> &AlgebraShape {
        self.element.shape()
    }

    /// The orthocomplement `1 − e`.
    pub fn complement(&self) -> Effect {
        Effect {
            element: AlgebraElement::unit(self.shape())
                .sub(&self.element)
                .expect("same shape"),
        }
    }

    /// The positive square root `√e` (small negative eigenvalues clamped).
    pub fn sqrt(&self) -> AlgebraElement {
        self.element
            .positive_sqrt()
            .expect("effects are positive by construction")
    }

    /// Conjugation by the square root: `√e · a · √e`, the basic
    /// measurement-update sandwich.
    pub fn sandwich(&self, a: &AlgebraElement) -> CstarResult<AlgebraElement> {
        let s = self.sqrt();
        s.mul(a)?.mul(&s)
    }
}

impl From<Effect> for AlgebraElement {
    fn from(e: Effect) -> Self {
        e.element
    }
}

impl TryFrom<AlgebraElement> for Effect {
    type Error = CstarError;

    fn try_from(element: AlgebraElement) -> CstarResult<Self> {
        Effect::new(element)
    }
}
