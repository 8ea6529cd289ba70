//! Exact conditioning of stochastic maps on fuzzy predicates.
//!
//! Given a stochastic map `f : X → Y` and a predicate `φ` on `X ⊗ Y`, the
//! pipeline builds the *joint* map `X → Y + Y` that runs `f`, asks `φ` of the
//! input/outcome pair, and routes the outcome into the "yes" or "no" copy of
//! `Y` accordingly.  [`condition`] then divides the joint by its marginal to
//! produce the two conditionals `f|φ` and `f|φ⊥`, the unique pair that makes
//! the triangle
//!
//! ```text
//!        char_m
//!   X ──────────► X + X ──(f|φ + f|φ⊥)──► Y + Y
//!   └───────────────── joint ───────────────┘
//! ```
//!
//! commute, where `m` is the predicted probability of `φ` at each input.
//! Everything is exact rational arithmetic: [`verify_triangle`] checks the
//! commutation as a strict equality, not up to tolerance.

use crate::dist::FiniteDistribution;
use crate::error::{ClassicalError, ClassicalResult};
use crate::kleisli::KleisliMap;
use crate::label::Label;
use crate::predicate::{omega, subst, Predicate};
use crate::ratio::{is_zero_or_one, Rat};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// The output of [`condition`]: both conditionals, the marginal they divide
/// by, the joint they reassemble into, and the inputs where division was
/// impossible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditioningResult {
    /// `f|φ : X → Y`, the map conditioned on the predicate holding.
    pub cond_true: KleisliMap,
    /// `f|φ⊥ : X → Y`, the map conditioned on the predicate failing.
    pub cond_false: KleisliMap,
    /// The predicted probability `m(x)` of the predicate at each input.
    pub marginal: Predicate,
    /// The joint map `X → Y + Y` the conditionals were divided out of.
    pub joint: KleisliMap,
    /// Inputs where the marginal is 0 or 1, so one conditional row is
    /// arbitrary; those rows are filled with the uniform distribution.
    pub degenerate_points: BTreeSet<Label>,
}

/// Checks that `phi` is a predicate on `f.source() ⊗ f.target()`.
fn expect_joint_carrier(f: &KleisliMap, phi: &Predicate) -> ClassicalResult<()> {
    if *phi.carrier() != f.source().tensor(f.target()) {
        return Err(ClassicalError::SetMismatch("conditioning predicate"));
    }
    Ok(())
}

/// The joint map `X → Y + Y` of a stochastic map and a predicate on
/// `X ⊗ Y`: composition of the graph of `f`, the characteristic map of `φ`,
/// and projection-to-outcome on both copies.
pub fn joint_map(f: &KleisliMap, phi: &Predicate) -> ClassicalResult<KleisliMap> {
    expect_joint_carrier(f, phi)?;
    let tensor = phi.carrier().clone();
    let project_second = KleisliMap::from_function(tensor, f.target().clone(), |xy| {
        let (_, y) = xy.as_pair().expect("tensor labels are pairs");
        y.clone()
    })?;
    let both_copies = KleisliMap::coproduct_map(&project_second, &project_second)?;
    let split = KleisliMap::compose(&phi.char_map(), &f.graph())?;
    KleisliMap::compose(&both_copies, &split)
}

/// Conditions `f : X → Y` on a predicate `φ` over `X ⊗ Y`.
///
/// At each input `x` with marginal `m(x) ∉ {0, 1}` the conditionals are the
/// exact renormalized slices of the joint:
/// `f|φ(x)(y) = joint(x)(k1:y) / m(x)` and
/// `f|φ⊥(x)(y) = joint(x)(k2:y) / (1 − m(x))`.
/// Where `m(x)` is 0 (or 1) the true (or false) slice carries no mass, the
/// conditional row is genuinely arbitrary, and the uniform distribution is
/// used; such inputs are reported in
/// [`degenerate_points`](ConditioningResult::degenerate_points).
pub fn condition(f: &KleisliMap, phi: &Predicate) -> ClassicalResult<ConditioningResult> {
    expect_joint_carrier(f, phi)?;
    let joint = joint_map(f, phi)?;
    let marginal = subst(&f.graph(), phi)?;

    let mut degenerate_points = BTreeSet::new();
    let uniform = FiniteDistribution::uniform(f.target())?;
    let mut true_rows = Vec::with_capacity(f.source().len());
    let mut false_rows = Vec::with_capacity(f.source().len());

    for x in f.source().iter() {
        let m = marginal.value(x)?.clone();
        if is_zero_or_one(&m) {
            degenerate_points.insert(x.clone());
        }
        let joint_row = joint.row(x)?;
        let slice = |tag: fn(Label) -> Label, mass: &Rat| -> FiniteDistribution {
            if mass.is_zero() {
                return uniform.clone();
            }
            FiniteDistribution::new(f.target().iter().map(|y| {
                let w = joint_row.weight(&tag(y.clone()));
                (y.clone(), w / mass)
            }))
            .expect("joint slice renormalizes exactly to its mass")
        };
        true_rows.push((x.clone(), slice(Label::left, &m)));
        false_rows.push((x.clone(), slice(Label::right, &(Rat::one() - &m))));
    }

    let cond_true = KleisliMap::new(f.source().clone(), f.target().clone(), true_rows)?;
    let cond_false = KleisliMap::new(f.source().clone(), f.target().clone(), false_rows)?;
    Ok(ConditioningResult {
        cond_true,
        cond_false,
        marginal,
        joint,
        degenerate_points,
    })
}

/// Conditions `f` on every predicate of an n-test `φ₁ ⊎ … ⊎ φₙ = 1`,
/// returning the conditionals `f|φᵢ` in order.
///
/// Errors with [`ClassicalError::NotATest`] unless the predicates sum to
/// exactly 1 at every point of `X ⊗ Y`.
pub fn condition_ntest(
    f: &KleisliMap,
    tests: &[Predicate],
) -> ClassicalResult<Vec<KleisliMap>> {
    let carrier = f.source().tensor(f.target());
    for phi in tests {
        if *phi.carrier() != carrier {
            return Err(ClassicalError::SetMismatch("conditioning predicate"));
        }
    }
    for xy in carrier.iter() {
        let total: Rat = tests
            .iter()
            .map(|phi| phi.value(xy).cloned())
            .sum::<ClassicalResult<Rat>>()?;
        if !total.is_one() {
            return Err(ClassicalError::NotATest(xy.clone()));
        }
    }
    tests
        .iter()
        .map(|phi| Ok(condition(f, phi)?.cond_true))
        .collect()
}

/// Checks the defining triangle of a conditioning result by recomposition:
/// `(f|φ + f|φ⊥) ⊙ char_m` must equal the joint, as an exact equality of
/// stochastic maps.  Also re-derives the marginal from the joint (the mass
/// landing in the left copy) and compares.
pub fn verify_triangle(result: &ConditioningResult) -> bool {
    let paired = match KleisliMap::coproduct_map(&result.cond_true, &result.cond_false) {
        Ok(map) => map,
        Err(_) => return false,
    };
    let composite = match KleisliMap::compose(&paired, &result.marginal.char_map()) {
        Ok(map) => map,
        Err(_) => return false,
    };
    if composite != result.joint {
        return false;
    }
    // The marginal must be exactly the mass the joint routes into the left copy.
    let left_mass = match subst(&result.joint, &omega(result.cond_true.target())) {
        Ok(pred) => pred,
        Err(_) => return false,
    };
    left_mass == result.marginal
}
