//! Acceptance gate: eight end-to-end checks covering both engines, the
//! worked examples, the randomized law suites, and cross-engine agreement.
//!
//! Each check prints exactly one `PASS`/`FAIL` line (run with
//! `cargo test --test acceptance -- --nocapture` to see them) and enforces
//! a wall-clock budget.

use condprob::bomb::Scenario;
use condprob::cstar::{
    char_map, condition_param, condition_state, coprojection_first, graph, luders_oracle,
    AlgebraElement, AlgebraShape, Effect, PUMap, State, C,
};
use condprob::ratio::rat_to_f64;
use condprob::{
    condition, omega, rat, rat_int, subst, FiniteDistribution, FiniteSet, KleisliMap, Label,
    Predicate, Rat,
};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

/// Prints the per-criterion verdict line, then enforces it.
fn verdict(index: usize, name: &str, started: Instant, budget: Duration, ok: bool, detail: &str) {
    let elapsed = started.elapsed();
    let status = if ok && elapsed <= budget { "PASS" } else { "FAIL" };
    println!(
        "[acceptance {index}/8] {name}: {status} in {elapsed:?} (budget {budget:?}) {detail}"
    );
    assert!(ok, "acceptance {index} ({name}) failed: {detail}");
    assert!(
        elapsed <= budget,
        "acceptance {index} ({name}) blew its {budget:?} budget: took {elapsed:?}"
    );
}

fn atom(name: &str) -> Label {
    Label::atom(name)
}

#[test]
fn c1_single_state_example_is_exact_and_fast() {
    // Population two-thirds M / one-third W; the observed trait has
    // likelihood 3/10 on M and 8/10 on W.
    let genders = FiniteSet::from_atoms(["M", "W"]).unwrap();
    let population = KleisliMap::from_distribution(
        genders.clone(),
        FiniteDistribution::new([(atom("M"), rat(2, 3)), (atom("W"), rat(1, 3))]).unwrap(),
    )
    .unwrap();
    let likelihood = Predicate::new(
        genders.clone(),
        [(atom("M"), rat(3, 10)), (atom("W"), rat(8, 10))],
    )
    .unwrap();
    let phi = Predicate::on_second(population.source(), &likelihood);

    let started = Instant::now();
    let result = condition(&population, &phi).unwrap();
    let elapsed_budget = Duration::from_millis(1);

    let star = population.source().iter().next().unwrap().clone();
    let yes = result.cond_true.row(&star).unwrap();
    let no = result.cond_false.row(&star).unwrap();
    let ok = *result.marginal.value(&star).unwrap() == rat(7, 15)
        && yes.weight(&atom("M")) == rat(3, 7)
        && yes.weight(&atom("W")) == rat(4, 7)
        && no.weight(&atom("M")) == rat(7, 8)
        && no.weight(&atom("W")) == rat(1, 8)
        && result.degenerate_points.is_empty();
    verdict(
        1,
        "single-state conditioning hits the exact fractions",
        started,
        elapsed_budget,
        ok,
        "marginal 7/15, updates {3/7,4/7} and {7/8,1/8}",
    );
}

/// The two-country fixture shared by criteria 2 and 8.
fn country_fixture() -> (KleisliMap, Predicate) {
    let countries = FiniteSet::from_atoms(["A", "B"]).unwrap();
    let genders = FiniteSet::from_atoms(["M", "W"]).unwrap();
    let f = KleisliMap::new(
        countries.clone(),
        genders.clone(),
        [
            (
                atom("A"),
                FiniteDistribution::new([(atom("M"), rat(9, 20)), (atom("W"), rat(11, 20))])
                    .unwrap(),
            ),
            (
                atom("B"),
                FiniteDistribution::new([(atom("M"), rat(1, 2)), (atom("W"), rat(1, 2))])
                    .unwrap(),
            ),
        ],
    )
    .unwrap();
    let carrier = countries.tensor(&genders);
    let pair = |x: &str, y: &str| Label::pair(atom(x), atom(y));
    let phi = Predicate::new(
        carrier,
        [
            (pair("A", "M"), rat(1, 10)),
            (pair("A", "W"), rat(8, 10)),
            (pair("B", "M"), rat(2, 10)),
            (pair("B", "W"), rat(9, 10)),
        ],
    )
    .unwrap();
    (f, phi)
}

#[test]
fn c2_two_input_example_is_exact_and_fast() {
    let (f, phi) = country_fixture();

    let started = Instant::now();
    let result = condition(&f, &phi).unwrap();
    let budget = Duration::from_millis(1);

    let k1 = |y: &str| Label::left(atom(y));
    let k2 = |y: &str| Label::right(atom(y));
    let ja = result.joint.row(&atom("A")).unwrap();
    let jb = result.joint.row(&atom("B")).unwrap();
    let ta = result.cond_true.row(&atom("A")).unwrap();
    let tb = result.cond_true.row(&atom("B")).unwrap();
    let fa = result.cond_false.row(&atom("A")).unwrap();
    let fb = result.cond_false.row(&atom("B")).unwrap();
    let ok = ja.weight(&k1("M")) == rat(9, 200)
        && ja.weight(&k2("M")) == rat(81, 200)
        && ja.weight(&k1("W")) == rat(88, 200)
        && ja.weight(&k2("W")) == rat(22, 200)
        && jb.weight(&k1("M")) == rat(2, 20)
        && jb.weight(&k2("M")) == rat(8, 20)
        && jb.weight(&k1("W")) == rat(9, 20)
        && jb.weight(&k2("W")) == rat(1, 20)
        && *result.marginal.value(&atom("A")).unwrap() == rat(97, 200)
        && *result.marginal.value(&atom("B")).unwrap() == rat(11, 20)
        && ta.weight(&atom("M")) == rat(9, 97)
        && ta.weight(&atom("W")) == rat(88, 97)
        && tb.weight(&atom("M")) == rat(2, 11)
        && tb.weight(&atom("W")) == rat(9, 11)
        && fa.weight(&atom("M")) == rat(81, 103)
        && fa.weight(&atom("W")) == rat(22, 103)
        && fb.weight(&atom("M")) == rat(8, 9)
        && fb.weight(&atom("W")) == rat(1, 9);
    verdict(
        2,
        "two-input conditioning hits the exact fractions",
        started,
        budget,
        ok,
        "joints, marginals 97/200 and 11/20, and all four conditionals",
    );
}

#[test]
fn c3_exact_triangle_and_uniqueness_on_1000_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(1003);
    let started = Instant::now();
    let budget = Duration::from_secs(10);
    let mut checked = 0usize;
    let mut ok = true;

    'outer: for _ in 0..1000 {
        let nx = rng.random_range(1..=6);
        let ny = rng.random_range(1..=6);
        let xs =
            FiniteSet::from_atoms((0..nx).map(|i| format!("x{i}"))).unwrap();
        let ys =
            FiniteSet::from_atoms((0..ny).map(|i| format!("y{i}"))).unwrap();
        // Full-support rows with small random integer weights.
        let f = KleisliMap::from_fn(xs.clone(), ys.clone(), |_| {
            let weights: Vec<i64> = (0..ny).map(|_| rng.random_range(1..=9)).collect();
            let total: i64 = weights.iter().sum();
            FiniteDistribution::new(
                ys.iter()
                    .zip(&weights)
                    .map(|(y, &w)| (y.clone(), rat(w, total))),
            )
            .unwrap()
        })
        .unwrap();
        // Predicate values strictly inside (0, 1) force a non-degenerate
        // marginal everywhere.
        let carrier = xs.tensor(&ys);
        let phi = Predicate::new(
            carrier.clone(),
            carrier
                .iter()
                .map(|xy| (xy.clone(), rat(rng.random_range(1..=9), 10))),
        )
        .unwrap();

        let result = condition(&f, &phi).unwrap();
        if !result.degenerate_points.is_empty() || !condprob::verify_triangle(&result) {
            ok = false;
            break;
        }
        // Independent route: solve for the conditionals directly from the
        // joint rows, and demand exact agreement with the formula.
        for x in xs.iter() {
            let m = result.marginal.value(x).unwrap().clone();
            let joint_row = result.joint.row(x).unwrap();
            for y in ys.iter() {
                let solved_true = joint_row.weight(&Label::left(y.clone())) / &m;
                let solved_false = joint_row.weight(&Label::right(y.clone()))
                    / (rat_int(1) - &m);
                if result.cond_true.row(x).unwrap().weight(y) != solved_true
                    || result.cond_false.row(x).unwrap().weight(y) != solved_false
                {
                    ok = false;
                    break 'outer;
                }
            }
        }
        checked += 1;
    }

    verdict(
        3,
        "exact triangle recomposition and solved-vs-formula agreement",
        started,
        budget,
        ok && checked == 1000,
        &format!("{checked}/1000 random instances, |X|,|Y| ≤ 6, all exact"),
    );
}

#[test]
fn c4_interferometer_probabilities_and_round_trip() {
    let started = Instant::now();
    let budget = Duration::from_secs(1);
    let report = Scenario::new().unwrap().run().unwrap();
    let ok = (report.detection_probability - 0.125).abs() <= 1e-12
        && report.dud_given_detection.abs() <= 1e-12
        && report.round_trip_defect <= 1e-12;
    verdict(
        4,
        "interferometer detection 1/8, dud-given-detection 0, empty round trip",
        started,
        budget,
        ok,
        &format!(
            "p_detect = {}, p_dud = {}, round trip defect = {:.2e}",
            report.detection_probability, report.dud_given_detection, report.round_trip_defect
        ),
    );
}

fn random_element(rng: &mut ChaCha8Rng, shape: &AlgebraShape) -> AlgebraElement {
    let blocks = shape
        .blocks()
        .iter()
        .map(|&n| {
            DMatrix::from_fn(n, n, |_, _| {
                C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            })
        })
        .collect();
    AlgebraElement::from_blocks(shape.clone(), blocks).unwrap()
}

fn random_hermitian(rng: &mut ChaCha8Rng, shape: &AlgebraShape) -> AlgebraElement {
    let raw = random_element(rng, shape);
    raw.add(&raw.adjoint()).unwrap().scale(C::new(0.5, 0.0))
}

/// A random effect with spectrum inside `[1/2 − r, 1/2 + r]`, keeping every
/// marginal safely invertible.
fn random_interior_effect(rng: &mut ChaCha8Rng, shape: &AlgebraShape, r: f64) -> Effect {
    let h = random_hermitian(rng, shape);
    let norm = h.op_norm().max(1e-9);
    let squeezed = h
        .scale(C::new(r / norm, 0.0))
        .add(&AlgebraElement::unit(shape).scale(C::new(0.5, 0.0)))
        .unwrap();
    Effect::new(squeezed).unwrap()
}

fn random_density(rng: &mut ChaCha8Rng, shape: &AlgebraShape) -> AlgebraElement {
    let b = random_element(rng, shape);
    let pos = b
        .adjoint()
        .mul(&b)
        .unwrap()
        .add(&AlgebraElement::unit(shape).scale(C::new(0.05, 0.0)))
        .unwrap();
    let tr = pos.trace().re;
    pos.scale(C::new(1.0 / tr, 0.0))
}

/// A random positive unital map `B → Z(A)` by trace-pairing against one
/// random density per block of `A`.
fn random_center_valued(rng: &mut ChaCha8Rng, a: &AlgebraShape, b: &AlgebraShape) -> PUMap {
    let densities: Vec<AlgebraElement> =
        (0..a.num_blocks()).map(|_| random_density(rng, b)).collect();
    PUMap::from_fn(b, &a.center(), |x| {
        let values: Vec<C> = densities
            .iter()
            .map(|rho| {
                rho.blocks()
                    .iter()
                    .zip(x.blocks())
                    .map(|(r, m)| (r * m).trace())
                    .sum()
            })
            .collect();
        AlgebraElement::from_center_values(&a.center(), &values).unwrap()
    })
    .unwrap()
}

#[test]
fn c5_operator_triangle_on_200_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(1005);
    let started = Instant::now();
    let budget = Duration::from_secs(30);
    let shapes_a = [
        AlgebraShape::new([2]).unwrap(),
        AlgebraShape::new([2, 1]).unwrap(),
        AlgebraShape::scalars(3).unwrap(),
    ];
    let shapes_b = [AlgebraShape::new([2]).unwrap(), AlgebraShape::scalars(2).unwrap()];
    let mut worst_residual: f64 = 0.0;
    let mut worst_gap: f64 = 0.0;
    let mut ok = true;

    for i in 0..200 {
        let a = &shapes_a[i % 3];
        let b = &shapes_b[(i / 3) % 2];
        let f = random_center_valued(&mut rng, a, b);
        let e = random_interior_effect(&mut rng, &a.tensor(b), 0.4);
        let result = match condition_param(a, &f, &e) {
            Ok(r) => r,
            Err(_) => {
                ok = false;
                break;
            }
        };
        let residual = result.triangle_residual(10, 1005 + i as u64).unwrap();
        let gap = result.reconstruction_gap().unwrap();
        worst_residual = worst_residual.max(residual);
        worst_gap = worst_gap.max(gap);
        if residual >= 1e-8 || gap >= 1e-10 {
            ok = false;
            break;
        }
    }

    verdict(
        5,
        "operator triangle residual < 1e-8 and reconstruction gap < 1e-10",
        started,
        budget,
        ok,
        &format!("200 instances; worst residual {worst_residual:.2e}, worst gap {worst_gap:.2e}"),
    );
}

/// Gram–Schmidt a small set of random vectors into a projection of the
/// requested rank.
fn random_projection(rng: &mut ChaCha8Rng, n: usize, rank: usize) -> DMatrix<C> {
    let mut basis: Vec<DVector<C>> = Vec::new();
    while basis.len() < rank {
        let mut v = DVector::from_fn(n, |_, _| {
            C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        for u in &basis {
            let overlap = u.dotc(&v);
            v -= u * overlap;
        }
        let norm = v.norm();
        if norm > 1e-6 {
            v /= C::new(norm, 0.0);
            basis.push(v);
        }
    }
    let mut p = DMatrix::zeros(n, n);
    for u in &basis {
        p += u * u.adjoint();
    }
    p
}

#[test]
fn c6_state_update_matches_the_sequential_measurement_rule_500_times() {
    let mut rng = ChaCha8Rng::seed_from_u64(1006);
    let started = Instant::now();
    let budget = Duration::from_secs(10);
    let mut checked = 0usize;
    let mut worst: f64 = 0.0;
    let mut ok = true;

    for i in 0..500 {
        let n = 2 + (i % 3);
        let shape = AlgebraShape::new([n]).unwrap();
        let rho = random_density(&mut rng, &shape);
        let rank = 1 + (i % (n - 1).max(1));
        let projection_matrix = random_projection(&mut rng, n, rank);
        let projection =
            AlgebraElement::from_blocks(shape.clone(), vec![projection_matrix]).unwrap();
        let b = random_hermitian(&mut rng, &shape);

        let omega_state = State::from_density(&rho).unwrap();
        let effect = Effect::new(projection.clone()).unwrap();
        // The density floor keeps every outcome probability far from 0 and 1,
        // so no draw is degenerate.
        let update = condition_state(&omega_state, &effect).unwrap();
        let via_update = update.cond_true.expect(&b).unwrap();
        let via_oracle = luders_oracle(&rho, &projection, &b).unwrap();
        let err = (via_update - via_oracle).norm();
        worst = worst.max(err);
        if err >= 1e-9 {
            ok = false;
            break;
        }
        checked += 1;
    }

    verdict(
        6,
        "state update vs direct sequential-measurement rule on dims 2-4",
        started,
        budget,
        ok && checked == 500,
        &format!("{checked}/500 instances compared; worst disagreement {worst:.2e}"),
    );
}

#[test]
fn c7_structural_law_suites_under_a_fixed_seed() {
    let mut rng = ChaCha8Rng::seed_from_u64(1007);
    let started = Instant::now();
    let budget = Duration::from_secs(60);
    let mut ok = true;
    let mut failed_law = "";

    fn random_pred(rng: &mut ChaCha8Rng, set: &FiniteSet) -> Predicate {
        Predicate::new(
            set.clone(),
            set.iter()
                .map(|x| (x.clone(), rat(rng.random_range(0..=20), 20))),
        )
        .unwrap()
    }

    // --- Effect-algebra and effect-module laws on random predicates. ---
    let xs = FiniteSet::from_atoms(["a", "b", "c", "d", "e"]).unwrap();
    for _ in 0..100 {
        let p = random_pred(&mut rng, &xs);
        let q = random_pred(&mut rng, &xs);
        let truth = Predicate::truth(xs.clone());
        let falsity = Predicate::falsity(xs.clone());
        if p.partial_add(&p.complement()).unwrap() != truth
            || p.partial_add(&falsity).unwrap() != p
            || p.complement().complement() != p
        {
            ok = false;
            failed_law = "effect-algebra involution/unit laws";
            break;
        }
        match (p.partial_add(&q), q.partial_add(&p)) {
            (Ok(lhs), Ok(rhs)) => {
                if lhs != rhs {
                    ok = false;
                    failed_law = "partial-sum commutativity";
                    break;
                }
            }
            (Err(_), Err(_)) => {}
            _ => {
                ok = false;
                failed_law = "partial-sum definedness symmetry";
                break;
            }
        }
        let r = rat(rng.random_range(0..=10), 10);
        let s = rat(rng.random_range(0..=10), 10);
        let both = p.scale(&(&r * &s)).unwrap();
        if p.scale(&s).unwrap().scale(&r).unwrap() != both
            || p.scale(&rat_int(1)).unwrap() != p
        {
            ok = false;
            failed_law = "scalar action laws";
            break;
        }
    }

    // --- Monad / composition laws on random stochastic maps. ---
    let random_map = |rng: &mut ChaCha8Rng, src: &FiniteSet, tgt: &FiniteSet| {
        let size = tgt.len();
        KleisliMap::from_fn(src.clone(), tgt.clone(), |_| {
            let weights: Vec<i64> = (0..size).map(|_| rng.random_range(1..=9)).collect();
            let total: i64 = weights.iter().sum();
            FiniteDistribution::new(
                tgt.iter()
                    .zip(&weights)
                    .map(|(y, &w)| (y.clone(), rat(w, total))),
            )
            .unwrap()
        })
        .unwrap()
    };
    if ok {
        let ys = FiniteSet::from_atoms(["u", "v", "w"]).unwrap();
        let zs = FiniteSet::from_atoms(["s", "t"]).unwrap();
        for _ in 0..50 {
            let f = random_map(&mut rng, &xs, &ys);
            let g = random_map(&mut rng, &ys, &zs);
            let h = random_map(&mut rng, &zs, &xs);
            let id_x = KleisliMap::identity(&xs);
            let id_y = KleisliMap::identity(&ys);
            let left = KleisliMap::compose(&id_y, &f).unwrap();
            let right = KleisliMap::compose(&f, &id_x).unwrap();
            let assoc_l = KleisliMap::compose(
                &h,
                &KleisliMap::compose(&g, &f).unwrap(),
            )
            .unwrap();
            let assoc_r = KleisliMap::compose(
                &KleisliMap::compose(&h, &g).unwrap(),
                &f,
            )
            .unwrap();
            if left != f || right != f || assoc_l != assoc_r {
                ok = false;
                failed_law = "category identity/associativity";
                break;
            }
            // Graph round trip.
            if KleisliMap::ungraph(&f.graph()).unwrap() != f {
                ok = false;
                failed_law = "graph/ungraph round trip";
                break;
            }
            // Substitution is functorial: pulling back along a composite is
            // pulling back in two steps.
            let qz = random_pred(&mut rng, &zs);
            let two_step = subst(&f, &subst(&g, &qz).unwrap()).unwrap();
            let one_step = subst(&KleisliMap::compose(&g, &f).unwrap(), &qz).unwrap();
            if two_step != one_step {
                ok = false;
                failed_law = "substitution functoriality";
                break;
            }
            // The characteristic map answers its own question.
            let qx = random_pred(&mut rng, &xs);
            if subst(&qx.char_map(), &omega(&xs)).unwrap() != qx {
                ok = false;
                failed_law = "characteristic/indicator adjunction";
                break;
            }
        }
    }

    // --- Operator-side laws. ---
    if ok {
        let m2 = AlgebraShape::new([2]).unwrap();
        let hybrid = AlgebraShape::new([2, 1]).unwrap();
        for _ in 0..50 {
            // Sandwich positivity: conjugating a positive element stays
            // positive.
            let cpos = random_element(&mut rng, &hybrid);
            let a_pos = cpos.adjoint().mul(&cpos).unwrap();
            let conj = random_element(&mut rng, &hybrid);
            let sandwiched = conj
                .mul(&a_pos)
                .unwrap()
                .mul(&conj.adjoint())
                .unwrap();
            if !sandwiched.is_positive(1e-9) {
                ok = false;
                failed_law = "sandwich positivity";
                break;
            }
            // Square-root round trip with the relative tolerance.
            let root = a_pos.positive_sqrt().unwrap();
            let back = root.mul(&root).unwrap();
            let err = back.sub(&a_pos).unwrap().op_norm();
            if err > 1e-10 * (1.0 + a_pos.op_norm()) {
                ok = false;
                failed_law = "square-root round trip";
                break;
            }
            // The operator characteristic map answers its own question.
            let e = random_interior_effect(&mut rng, &m2, 0.45);
            let recovered = char_map(&e)
                .apply(Effect::omega(&m2).element())
                .unwrap();
            if recovered.max_abs_diff(e.element()) > 1e-12 {
                ok = false;
                failed_law = "operator characteristic/indicator adjunction";
                break;
            }
            // Graphs restrict to the identity on the first leg.
            let f = random_center_valued(&mut rng, &hybrid, &m2);
            let gr = graph(&hybrid, &f).unwrap();
            let retract = PUMap::compose(&gr, &coprojection_first(&hybrid, &m2)).unwrap();
            let id = DMatrix::identity(hybrid.dim(), hybrid.dim());
            if (retract.matrix() - id).norm() > 1e-12 {
                ok = false;
                failed_law = "graph retraction";
                break;
            }
            // On commutative algebras the characteristic map collapses to
            // convex mixing.
            let c3 = AlgebraShape::scalars(3).unwrap();
            let ec = random_interior_effect(&mut rng, &c3, 0.45);
            let a1 = random_hermitian(&mut rng, &c3);
            let a2 = random_hermitian(&mut rng, &c3);
            let lhs = char_map(&ec).apply(&a1.direct_sum(&a2)).unwrap();
            let rhs = ec
                .element()
                .mul(&a1)
                .unwrap()
                .add(&ec.complement().element().mul(&a2).unwrap())
                .unwrap();
            if lhs.max_abs_diff(&rhs) > 1e-12 {
                ok = false;
                failed_law = "commutative characteristic collapse";
                break;
            }
        }
    }

    verdict(
        7,
        "structural law suites (effect algebra, category, operator laws)",
        started,
        budget,
        ok,
        if ok { "all laws held under seed 1007" } else { failed_law },
    );
}

#[test]
fn c8_both_engines_agree_on_the_commutative_fixture() {
    let started = Instant::now();
    let budget = Duration::from_secs(5);

    // Exact route.
    let (f, phi) = country_fixture();
    let exact = condition(&f, &phi).unwrap();

    // Operator route on commutative shapes, same numbers.
    let a = AlgebraShape::new([1, 1]).unwrap();
    let b = AlgebraShape::new([1, 1]).unwrap();
    let to_c = |r: &Rat| C::new(rat_to_f64(r), 0.0);
    let qf = PUMap::new(
        b.clone(),
        a.center(),
        DMatrix::from_row_slice(
            2,
            2,
            &[
                to_c(&rat(9, 20)),
                to_c(&rat(11, 20)),
                to_c(&rat(1, 2)),
                to_c(&rat(1, 2)),
            ],
        ),
    )
    .unwrap();
    let pair = |x: &str, y: &str| Label::pair(atom(x), atom(y));
    let e_values: Vec<C> = [
        pair("A", "M"),
        pair("A", "W"),
        pair("B", "M"),
        pair("B", "W"),
    ]
    .iter()
    .map(|xy| to_c(phi.value(xy).unwrap()))
    .collect();
    let e = Effect::new(
        AlgebraElement::from_center_values(&a.tensor(&b), &e_values).unwrap(),
    )
    .unwrap();
    let q = condition_param(&a, &qf, &e).unwrap();

    // Compare every number across the two engines.
    let countries = ["A", "B"];
    let genders = ["M", "W"];
    let mut worst: f64 = 0.0;
    for (i, x) in countries.iter().enumerate() {
        let mq = q.marginal.element().center_values()[i].re;
        let mc = rat_to_f64(exact.marginal.value(&atom(x)).unwrap());
        worst = worst.max((mq - mc).abs());
        for (j, y) in genders.iter().enumerate() {
            let tq = q.cond_true.matrix()[(i, j)].re;
            let tc = rat_to_f64(&exact.cond_true.row(&atom(x)).unwrap().weight(&atom(y)));
            worst = worst.max((tq - tc).abs());
            let fq = q.cond_false.matrix()[(i, j)].re;
            let fc = rat_to_f64(&exact.cond_false.row(&atom(x)).unwrap().weight(&atom(y)));
            worst = worst.max((fq - fc).abs());
            let jq1 = q.joint.matrix()[(i, j)].re;
            let jc1 = rat_to_f64(
                &exact
                    .joint
                    .row(&atom(x))
                    .unwrap()
                    .weight(&Label::left(atom(y))),
            );
            worst = worst.max((jq1 - jc1).abs());
            let jq2 = q.joint.matrix()[(i, 2 + j)].re;
            let jc2 = rat_to_f64(
                &exact
                    .joint
                    .row(&atom(x))
                    .unwrap()
                    .weight(&Label::right(atom(y))),
            );
            worst = worst.max((jq2 - jc2).abs());
        }
    }
    verdict(
        8,
        "operator engine reproduces the exact engine on commutative shapes",
        started,
        budget,
        worst <= 1e-12,
        &format!("largest cross-engine disagreement {worst:.2e}"),
    );
}
