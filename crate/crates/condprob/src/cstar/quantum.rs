//! Conditioning for operator-valued processes: the noncommutative version
//! of slicing a joint distribution by a predicate.
//!
//! A *process with hidden input* is a positive unital map `f : B → Z(A)`
//! into the center of `A` — for commutative algebras this is exactly a
//! stochastic matrix read backwards.  Given an effect `e` on `A ⊗ B`, the
//! pipeline mirrors the discrete engine arrow for arrow:
//!
//! * [`joint_map_q`] builds the two-outcome joint `B ⊕ B → A` by splitting
//!   on `e` with a characteristic map and then collapsing the graph;
//! * [`condition_param`] reads off the marginal effect `m = gr(f)(e)` and
//!   divides it back out by square-root conjugation, yielding the
//!   conditioned processes `f|e` and `f|e⊥`;
//! * [`QConditioningResult::triangle_residual`] re-composes the conditioned
//!   maps against the marginal and measures how far the result is from the
//!   joint — zero (up to rounding) exactly when conditioning succeeded.
//!
//! Unlike the discrete engine, a marginal whose spectrum touches `0` or `1`
//! cannot be divided out: there is no uniform-fallback row to reach for, so
//! [`condition_param`] reports [`CstarError::MarginalNotInvertible`] instead.
//!
//! [`condition_state`] is the state-side special case (`A = ℂ`): updating
//! an expectation functional by an observed effect, which for sharp effects
//! reproduces the textbook sequential-measurement rule implemented
//! independently in [`luders_oracle`].

use super::effect::Effect;
use super::element::AlgebraElement;
use super::pumap::{
    char_map, coprojection_second, direct_sum_map, graph, PUMap,
};
use super::shape::AlgebraShape;
use super::state::State;
use super::{C, INV_TOL};
use crate::error::{CstarError, CstarResult};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Everything produced by conditioning a process on an effect.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QConditioningResult {
    /// The process conditioned on the effect holding: `B → A`.
    pub cond_true: PUMap,
    /// The process conditioned on the effect failing: `B → A`.
    pub cond_false: PUMap,
    /// The marginal effect `m = gr(f)(e)` on `A` that was divided out.
    pub marginal: Effect,
    /// The two-outcome joint `B ⊕ B → A` the conditioned pair must
    /// recompose to.
    pub joint: PUMap,
}

/// Builds the two-outcome joint `B ⊕ B → A` of a center-valued process
/// `f : B → Z(A)` and an effect `e` on `A ⊗ B`:
/// `gr(f) ∘ char_e ∘ (κ₂ ⊕ κ₂)`.
///
/// Evaluated at `b₁ ⊕ b₂` this weighs `b₁` by the effect and `b₂` by its
/// complement before averaging over the process — the operator analogue of
/// a joint distribution over outcome-and-verdict pairs.
pub fn joint_map_q(a: &AlgebraShape, f: &PUMap, e: &Effect) -> CstarResult<PUMap> {
    if *f.target() != a.center() {
        return Err(CstarError::ShapeMismatch("joint expects a center-valued map"));
    }
    let b = f.source();
    if *e.shape() != a.tensor(b) {
        return Err(CstarError::ShapeMismatch("effect must live on the tensor"));
    }
    let gr = graph(a, f)?;
    let split = char_map(e);
    let k2 = coprojection_second(a, b);
    let pair = direct_sum_map(&k2, &k2);
    PUMap::compose(&gr, &PUMap::compose(&split, &pair)?)
}

/// Conditions a process `f : B → Z(A)` on an effect `e` over `A ⊗ B`.
///
/// The marginal `m = gr(f)(e)` and its complement must both be invertible
/// (all eigenvalues strictly inside `(0, 1)`); the conditioned processes are
/// then uniquely determined by the requirement that splitting on `m` and
/// running them recomposes the joint:
///
/// ```text
/// f|e(b) = m^{-1/2} · joint(b ⊕ 0) · m^{-1/2}
/// ```
pub fn condition_param(
    a: &AlgebraShape,
    f: &PUMap,
    e: &Effect,
) -> CstarResult<QConditioningResult> {
    let joint = joint_map_q(a, f, e)?;
    let marginal_element = graph(a, f)?.apply(e.element())?;
    let min = marginal_element.min_eigenvalue()?;
    let complement_min = AlgebraElement::unit(a)
        .sub(&marginal_element)?
        .min_eigenvalue()?;
    if min <= INV_TOL {
        return Err(CstarError::MarginalNotInvertible {
            min_eigenvalue: min,
        });
    }
    if complement_min <= INV_TOL {
        return Err(CstarError::MarginalNotInvertible {
            min_eigenvalue: complement_min,
        });
    }
    let marginal = Effect::new(marginal_element)?;
    let cond_true = divide_out(a, &joint, &marginal, true, min)?;
    let cond_false = divide_out(a, &joint, &marginal.complement(), false, complement_min)?;
    Ok(QConditioningResult {
        cond_true,
        cond_false,
        marginal,
        joint,
    })
}

/// Slices one half of the joint and conjugates by the inverse square root
/// of the given marginal.  `first` selects which copy of `B` to feed.
fn divide_out(
    a: &AlgebraShape,
    joint: &PUMap,
    m: &Effect,
    first: bool,
    min_eigenvalue: f64,
) -> CstarResult<PUMap> {
    let b = half_of(joint.source());
    let inv_root = m.element().inv_positive_sqrt()?;
    let zero = AlgebraElement::zeros(&b);
    let images: CstarResult<Vec<AlgebraElement>> = (0..b.dim())
        .map(|k| {
            let basis = AlgebraElement::basis_element(&b, k);
            let padded = if first {
                basis.direct_sum(&zero)
            } else {
                zero.direct_sum(&basis)
            };
            let sliced = joint.apply(&padded)?;
            inv_root.mul(&sliced)?.mul(&inv_root)
        })
        .collect();
    let images = images?;
    PUMap::from_basis_images(&b, a, |k| images[k].clone()).map_err(|err| match err {
        // The formula is unital in exact arithmetic; a failed check here
        // means the marginal was too ill-conditioned to normalize reliably.
        CstarError::NotUnital { .. } => CstarError::MarginalNotInvertible { min_eigenvalue },
        other => other,
    })
}

/// Recovers `B` from the shape `B ⊕ B`.
fn half_of(double: &AlgebraShape) -> AlgebraShape {
    let blocks = double.blocks();
    AlgebraShape::new(blocks[..blocks.len() / 2].to_vec())
        .expect("a doubled shape has a nonempty first half")
}

impl QConditioningResult {
    /// The outcome algebra `B`.
    pub fn outcome_shape(&self) -> &AlgebraShape {
        self.cond_true.source()
    }

    /// The hidden-input algebra `A`.
    pub fn input_shape(&self) -> &AlgebraShape {
        self.cond_true.target()
    }

    /// Measures how far `char_m ∘ (f|e ⊕ f|e⊥)` is from the joint: the
    /// largest operator norm of the difference on every matrix unit of
    /// `B ⊕ B` and on `probes` extra seeded random unit-norm Hermitian
    /// pairs.  A faithful conditioning result keeps this at rounding level.
    pub fn triangle_residual(&self, probes: usize, seed: u64) -> CstarResult<f64> {
        let recomposed = PUMap::compose(
            &char_map(&self.marginal),
            &direct_sum_map(&self.cond_true, &self.cond_false),
        )?;
        if recomposed.source() != self.joint.source()
            || recomposed.target() != self.joint.target()
        {
            return Err(CstarError::ShapeMismatch("triangle sides"));
        }
        let delta = recomposed.matrix() - self.joint.matrix();
        let source = self.joint.source().clone();
        let target = self.joint.target().clone();
        let mut worst: f64 = 0.0;
        // Every matrix unit of B ⊕ B (each has operator norm one).
        for k in 0..source.dim() {
            let image = AlgebraElement::from_vector(&target, &delta.column(k).into_owned())?;
            worst = worst.max(image.op_norm());
        }
        // Seeded random Hermitian probes of unit operator norm.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..probes {
            let h = random_unit_hermitian(&mut rng, &source);
            let image = AlgebraElement::from_vector(&target, &(&delta * h.vectorize()))?;
            worst = worst.max(image.op_norm());
        }
        Ok(worst)
    }

    /// Rebuilds both conditioned processes from the joint and the marginal
    /// by an independent linear-algebra route (plain LU inversion of the
    /// marginal's square root instead of spectral inversion) and returns the
    /// largest entrywise disagreement with the stored pair.
    ///
    /// Small values certify uniqueness concretely: any pair satisfying the
    /// triangle identity must match this reconstruction.
    pub fn reconstruction_gap(&self) -> CstarResult<f64> {
        let b = self.outcome_shape().clone();
        let zero = AlgebraElement::zeros(&b);
        let mut gap: f64 = 0.0;
        for (m, stored, first) in [
            (self.marginal.clone(), &self.cond_true, true),
            (self.marginal.complement(), &self.cond_false, false),
        ] {
            let inv_root = lu_inverse(&m.sqrt())?;
            for k in 0..b.dim() {
                let basis = AlgebraElement::basis_element(&b, k);
                let padded = if first {
                    basis.direct_sum(&zero)
                } else {
                    zero.direct_sum(&basis)
                };
                let sliced = self.joint.apply(&padded)?;
                let rebuilt = inv_root.mul(&sliced)?.mul(&inv_root)?;
                let stored_image = AlgebraElement::from_vector(
                    stored.target(),
                    &stored.matrix().column(k).into_owned(),
                )?;
                gap = gap.max(rebuilt.max_abs_diff(&stored_image));
            }
        }
        Ok(gap)
    }
}

/// Blockwise LU inversion, independent of the spectral route.
fn lu_inverse(x: &AlgebraElement) -> CstarResult<AlgebraElement> {
    let blocks: CstarResult<Vec<DMatrix<C>>> = x
        .blocks()
        .iter()
        .map(|b| {
            b.clone().try_inverse().ok_or(CstarError::NotInvertible {
                min_eigenvalue: 0.0,
            })
        })
        .collect();
    AlgebraElement::from_blocks(x.shape().clone(), blocks?)
}

fn random_unit_hermitian(rng: &mut ChaCha8Rng, shape: &AlgebraShape) -> AlgebraElement {
    let blocks: Vec<DMatrix<C>> = shape
        .blocks()
        .iter()
        .map(|&n| {
            let raw = DMatrix::from_fn(n, n, |_, _| {
                C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            });
            (&raw + raw.adjoint()) * C::new(0.5, 0.0)
        })
        .collect();
    let h = AlgebraElement::from_blocks(shape.clone(), blocks).expect("blocks built to shape");
    let norm = h.op_norm().max(1e-12);
    h.scale(C::new(1.0 / norm, 0.0))
}

/// The outcome of updating a state by an observed effect.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateConditioningResult {
    /// The state updated on the effect holding.
    pub cond_true: State,
    /// The state updated on the effect failing.
    pub cond_false: State,
    /// The probability the state assigned to the effect.
    pub probability: f64,
}

/// Updates a state by an effect: `ω|e(b) = ω(√e · b · √e) / ω(e)`, together
/// with the complementary update.
///
/// Both branches must be reachable: a probability within `INV_TOL` of `0`
/// or `1` is reported as [`CstarError::DegenerateEffect`], the state-side
/// face of a non-invertible marginal.
pub fn condition_state(omega: &State, e: &Effect) -> CstarResult<StateConditioningResult> {
    if omega.shape() != e.shape() {
        return Err(CstarError::ShapeMismatch("state and effect algebras"));
    }
    let probability = omega.prob(e)?;
    if probability <= INV_TOL || probability >= 1.0 - INV_TOL {
        return Err(CstarError::DegenerateEffect { probability });
    }
    let shape = omega.shape().clone();
    let scalars = AlgebraShape::scalars(1).expect("one block");
    let branch = |root: AlgebraElement, p: f64| -> CstarResult<State> {
        let base = omega.clone();
        let map = PUMap::from_fn(&shape, &scalars, |b| {
            let sandwiched = root.mul(b).unwrap().mul(&root).unwrap();
            let value = base.expect(&sandwiched).expect("same algebra");
            AlgebraElement::from_center_values(&scalars, &[value / C::new(p, 0.0)])
                .expect("one scalar")
        })?;
        State::from_map(map)
    };
    Ok(StateConditioningResult {
        cond_true: branch(e.sqrt(), probability)?,
        cond_false: branch(e.complement().sqrt(), 1.0 - probability)?,
        probability,
    })
}

/// The textbook sequential-measurement update, computed directly with
/// matrix products and traces: for a density `ρ` and a sharp effect
/// (projection) `a`, the updated expectation of `b` is
/// `tr(ρ·a·b·a) / tr(ρ·a)`.
///
/// This shares no code with [`condition_state`], so agreement between the
/// two is evidence for both.
pub fn luders_oracle(
    rho: &AlgebraElement,
    projection: &AlgebraElement,
    b: &AlgebraElement,
) -> CstarResult<C> {
    let numerator = rho
        .mul(projection)?
        .mul(b)?
        .mul(projection)?
        .trace();
    let denominator = rho.mul(projection)?.trace();
    if denominator.norm() <= INV_TOL {
        return Err(CstarError::DegenerateEffect {
            probability: denominator.re,
        });
    }
    Ok(numerator / denominator)
}
