//! The bomb-tester interferometer: conditioning a genuinely quantum state
//! on an observed detector click.
//!
//! A photon enters a two-arm interferometer.  One arm may contain a bomb
//! that absorbs the photon and explodes — but only if the bomb is *live*;
//! duds let the photon pass.  The photon crosses a semi-silvered mirror,
//! the lower arm passes the bomb, two full mirrors fold the arms back
//! together, and a second semi-silvered mirror recombines them in front of
//! two detectors.  With no live bomb the arms interfere destructively and
//! the photon always exits toward the *right* detector; a live bomb blocks
//! one arm, breaks the interference, and makes the *up* detector reachable.
//!
//! The punchline is a conditioning statement: given that the up detector
//! clicked and nothing exploded, the bomb is live with probability one —
//! the bomb's liveness has been observed without detonating it.  This
//! module builds the scenario on the hybrid algebra
//! `ℂ² ⊗ M₃ ⊗ M₂` (bomb quality ⊗ photon mode ⊗ explosion register),
//! drives it with the same state-evolution and state-conditioning
//! machinery as every other example, and reports the exact dyadic
//! probabilities the construction forces.

use crate::cstar::{condition_state, AlgebraElement, AlgebraShape, Effect, PUMap, State, C};
use crate::error::CstarResult;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Photon mode indices: moving up, moving right, absent.
const UP: usize = 0;
const RIGHT: usize = 1;
const ABSENT: usize = 2;

/// Explosion-register indices.
const INTACT: usize = 0;
const EXPLODED: usize = 1;

/// Dimension of the photon ⊗ register factor.
const PB: usize = 6;

fn c(re: f64) -> C {
    C::new(re, 0.0)
}

/// Index of the product basis vector `|photon, register⟩`.
fn pb(photon: usize, register: usize) -> usize {
    photon * 2 + register
}

/// The semi-silvered mirror on the photon mode:
/// `|right⟩ ↦ (|right⟩ + |up⟩)/√2`, `|up⟩ ↦ (|right⟩ − |up⟩)/√2`,
/// absent stays absent.
pub fn semi_silvered_unitary() -> DMatrix<C> {
    let s = c(std::f64::consts::FRAC_1_SQRT_2);
    let mut u = DMatrix::zeros(3, 3);
    u[(RIGHT, RIGHT)] = s;
    u[(UP, RIGHT)] = s;
    u[(RIGHT, UP)] = s;
    u[(UP, UP)] = -s;
    u[(ABSENT, ABSENT)] = c(1.0);
    u
}

/// The pair of full mirrors folding the arms back: swaps up and right.
pub fn full_mirror_unitary() -> DMatrix<C> {
    let mut u = DMatrix::zeros(3, 3);
    u[(UP, RIGHT)] = c(1.0);
    u[(RIGHT, UP)] = c(1.0);
    u[(ABSENT, ABSENT)] = c(1.0);
    u
}

/// The bomb interaction on photon ⊗ register: a rightward photon is
/// absorbed and the register flips to exploded; to stay unitary the map
/// also sends the (never occupied) absent-and-exploded state back.  All
/// other basis states are fixed.
pub fn interaction_unitary() -> DMatrix<C> {
    let mut u = DMatrix::identity(PB, PB);
    u[(pb(RIGHT, INTACT), pb(RIGHT, INTACT))] = c(0.0);
    u[(pb(ABSENT, EXPLODED), pb(ABSENT, EXPLODED))] = c(0.0);
    u[(pb(ABSENT, EXPLODED), pb(RIGHT, INTACT))] = c(1.0);
    u[(pb(RIGHT, INTACT), pb(ABSENT, EXPLODED))] = c(1.0);
    u
}

/// The full interferometer: algebra, initial state, named stages, and the
/// effects read out at the end.
pub struct Scenario {
    shape: AlgebraShape,
    initial: State,
    stages: Vec<(&'static str, PUMap)>,
    detector_up: Effect,
    dud_observable: AlgebraElement,
}

/// One row of the stage-by-stage outcome table: what each detector effect
/// would report if read out at that point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StageOutcomes {
    /// Which stage the photon has just passed.
    pub stage: String,
    /// Up detector clicks, nothing exploded.
    pub detected_up: f64,
    /// Right detector clicks, nothing exploded.
    pub exited_right: f64,
    /// The explosion register tripped.
    pub exploded: f64,
    /// No photon and no explosion.
    pub vanished: f64,
}

/// The final report: the conditioning result and its supporting numbers.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    /// Probability that the up detector clicks with the register intact.
    pub detection_probability: f64,
    /// Probability the bomb is a dud, given an up-detector click: zero.
    pub dud_given_detection: f64,
    /// Probability the bomb is live, given an up-detector click: one.
    pub live_given_detection: f64,
    /// How far the empty interferometer is from returning the photon to
    /// the right detector: `‖U_S·U_F·U_S|right⟩ − |right⟩‖`.
    pub round_trip_defect: f64,
    /// Outcome probabilities after each stage.
    pub stages: Vec<StageOutcomes>,
}

impl Scenario {
    /// Builds the standard scenario: fifty-fifty live-or-dud bomb, photon
    /// entering toward the right, register intact.
    pub fn new() -> CstarResult<Self> {
        // Bomb quality is classical (two one-dimensional blocks: live then
        // dud); photon and register are quantum.  The full algebra is
        // (ℂ ⊕ ℂ) ⊗ M₃ ⊗ M₂ = M₆ ⊕ M₆.
        let quality = AlgebraShape::new([1, 1])?;
        let photon = AlgebraShape::new([3])?;
        let register = AlgebraShape::new([2])?;
        let shape = quality.tensor(&photon).tensor(&register);

        // Initial density: each quality branch holds half the mass, with
        // the photon heading right and the register intact.
        let entry = pb(RIGHT, INTACT);
        let mut rho = AlgebraElement::zeros(&shape);
        rho.block_mut(0)[(entry, entry)] = c(0.5);
        rho.block_mut(1)[(entry, entry)] = c(0.5);
        let initial = State::from_density(&rho)?;

        let one2 = DMatrix::identity(2, 2);
        let splitter = semi_silvered_unitary().kronecker(&one2);
        let fold = full_mirror_unitary().kronecker(&one2);
        let interact = interaction_unitary();
        let stages = vec![
            ("first semi-silvered mirror", conjugate_both(&shape, &splitter)?),
            ("bomb interaction", conjugate_live_branch(&shape, &interact)?),
            ("full mirrors", conjugate_both(&shape, &fold)?),
            ("second semi-silvered mirror", conjugate_both(&shape, &splitter)?),
        ];

        let detector_up = Effect::new(both_branches(&shape, &mode_projector(UP, INTACT)))?;
        // The indicator of the dud branch, tensored with everything.
        let mut dud_observable = AlgebraElement::zeros(&shape);
        dud_observable
            .block_mut(1)
            .copy_from(&DMatrix::identity(PB, PB));

        Ok(Scenario {
            shape,
            initial,
            stages,
            detector_up,
            dud_observable,
        })
    }

    /// The algebra everything lives on.
    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    /// The state before any mirror.
    pub fn initial_state(&self) -> &State {
        &self.initial
    }

    /// The named stages in the order the photon meets them.
    pub fn stages(&self) -> &[(&'static str, PUMap)] {
        &self.stages
    }

    /// The effect "up detector clicked and the register is intact".
    pub fn detector_up(&self) -> &Effect {
        &self.detector_up
    }

    /// The observable asking whether the bomb is a dud.
    pub fn dud_observable(&self) -> &AlgebraElement {
        &self.dud_observable
    }

    /// The state after every stage has acted.
    pub fn final_state(&self) -> CstarResult<State> {
        let mut state = self.initial.clone();
        for (_, stage) in &self.stages {
            state = state.evolve(stage)?;
        }
        Ok(state)
    }

    /// Runs the interferometer and conditions on the up-detector click.
    pub fn run(&self) -> CstarResult<Report> {
        let mut stages = Vec::new();
        let mut state = self.initial.clone();
        stages.push(self.outcomes("entry", &state)?);
        for (name, stage) in &self.stages {
            state = state.evolve(stage)?;
            stages.push(self.outcomes(name, &state)?);
        }

        let detection_probability = state.prob(&self.detector_up)?;
        let update = condition_state(&state, &self.detector_up)?;
        let dud_given_detection = update.cond_true.expect(&self.dud_observable)?.re;
        let live_given_detection = update
            .cond_true
            .expect(
                &AlgebraElement::unit(&self.shape)
                    .sub(&self.dud_observable)
                    .expect("same shape"),
            )?
            .re;

        let u_s = semi_silvered_unitary();
        let u_f = full_mirror_unitary();
        let mut right = DVector::zeros(3);
        right[RIGHT] = c(1.0);
        let round_trip_defect = (&u_s * &u_f * &u_s * &right - &right).norm();

        Ok(Report {
            detection_probability,
            dud_given_detection,
            live_given_detection,
            round_trip_defect,
            stages,
        })
    }

    fn outcomes(&self, stage: &str, state: &State) -> CstarResult<StageOutcomes> {
        let probe = |m: &DMatrix<C>| -> CstarResult<f64> {
            state.prob(&Effect::new(both_branches(&self.shape, m))?)
        };
        // The register-tripped effect spans all photon modes.
        let mut exploded = DMatrix::zeros(PB, PB);
        for photon in [UP, RIGHT, ABSENT] {
            exploded[(pb(photon, EXPLODED), pb(photon, EXPLODED))] = c(1.0);
        }
        Ok(StageOutcomes {
            stage: stage.to_owned(),
            detected_up: probe(&mode_projector(UP, INTACT))?,
            exited_right: probe(&mode_projector(RIGHT, INTACT))?,
            exploded: probe(&exploded)?,
            vanished: probe(&mode_projector(ABSENT, INTACT))?,
        })
    }
}

/// The rank-one projector onto `|photon, register⟩` in the six-dimensional
/// photon ⊗ register factor.
fn mode_projector(photon: usize, register: usize) -> DMatrix<C> {
    let mut p = DMatrix::zeros(PB, PB);
    p[(pb(photon, register), pb(photon, register))] = c(1.0);
    p
}

/// Places the same photon ⊗ register matrix in both quality branches.
fn both_branches(shape: &AlgebraShape, m: &DMatrix<C>) -> AlgebraElement {
    let mut out = AlgebraElement::zeros(shape);
    out.block_mut(0).copy_from(m);
    out.block_mut(1).copy_from(m);
    out
}

/// The stage `a ↦ u* a u` applied in both quality branches: optics that
/// does not care whether the bomb is live.
fn conjugate_both(shape: &AlgebraShape, u: &DMatrix<C>) -> CstarResult<PUMap> {
    let ustar = u.adjoint();
    PUMap::from_fn(shape, shape, |a| {
        let mut out = AlgebraElement::zeros(shape);
        out.block_mut(0).copy_from(&(&ustar * a.block(0) * u));
        out.block_mut(1).copy_from(&(&ustar * a.block(1) * u));
        out
    })
}

/// The stage `a ↦ u* a u` applied only in the live branch: duds leave the
/// photon untouched.
fn conjugate_live_branch(shape: &AlgebraShape, u: &DMatrix<C>) -> CstarResult<PUMap> {
    let ustar = u.adjoint();
    PUMap::from_fn(shape, shape, |a| {
        let mut out = AlgebraElement::zeros(shape);
        out.block_mut(0).copy_from(&(&ustar * a.block(0) * u));
        out.block_mut(1).copy_from(a.block(1));
        out
    })
}
