//! Fuzzy predicates and their effect-module structure.
//!
//! A [`Predicate`] on a finite set assigns each point an exact rational truth
//! value in `[0, 1]`.  Predicates on a fixed set form an effect module: a
//! *partial* sum [`Predicate::partial_add`] defined only when the pointwise
//! total stays at or below 1, an [orthocomplement](Predicate::complement)
//! `p⊥ = 1 − p`, and a scalar action by `[0, 1]` rationals.  Stochastic maps
//! act on predicates contravariantly by [substitution](subst), and every
//! predicate induces a [characteristic map](Predicate::char_map) that splits
//! its carrier into a weighted "yes" copy and "no" copy — the hinge between
//! predicate logic and map composition that conditioning turns on.

use crate::dist::FiniteDistribution;
use crate::error::{ClassicalError, ClassicalResult};
use crate::kleisli::KleisliMap;
use crate::label::Label;
use crate::ratio::{in_unit_interval, Rat};
use crate::set::FiniteSet;
use num_traits::{One, Zero};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;

/// A `[0, 1]`-valued predicate on a finite set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Predicate {
    carrier: FiniteSet,
    values: BTreeMap<Label, Rat>,
}

impl Predicate {
    /// Builds a predicate from explicit values; labels omitted from `values`
    /// get truth value 0, labels outside the carrier are rejected, and every
    /// value must lie in `[0, 1]`.
    pub fn new(
        carrier: FiniteSet,
        values: impl IntoIterator<Item = (Label, Rat)>,
    ) -> ClassicalResult<Self> {
        let mut filled: BTreeMap<Label, Rat> =
            carrier.iter().map(|x| (x.clone(), Rat::zero())).collect();
        for (label, value) in values {
            if !in_unit_interval(&value) {
                return Err(ClassicalError::ValueOutOfRange { label, value });
            }
            match filled.get_mut(&label) {
                Some(slot) => *slot = value,
                None => return Err(ClassicalError::UnknownLabel(label)),
            }
        }
        Ok(Predicate {
            carrier,
            values: filled,
        })
    }

    /// The constant predicate with value `r`.
    pub fn constant(carrier: FiniteSet, r: Rat) -> ClassicalResult<Self> {
        if !in_unit_interval(&r) {
            return Err(ClassicalError::ScalarOutOfRange(r));
        }
        let values = carrier.iter().map(|x| (x.clone(), r.clone())).collect();
        Ok(Predicate { carrier, values })
    }

    /// The always-true predicate `1`.
    pub fn truth(carrier: FiniteSet) -> Self {
        Self::constant(carrier, Rat::one()).expect("1 is in [0, 1]")
    }

    /// The always-false predicate `0`.
    pub fn falsity(carrier: FiniteSet) -> Self {
        Self::constant(carrier, Rat::zero()).expect("0 is in [0, 1]")
    }

    /// The sharp predicate that is 1 exactly on `point`.
    pub fn point(carrier: FiniteSet, point: &Label) -> ClassicalResult<Self> {
        carrier.expect_member(point)?;
        let p = point.clone();
        Self::new(carrier, [(p, Rat::one())])
    }

    /// The carrier set.
    pub fn carrier(&self) -> &FiniteSet {
        &self.carrier
    }

    /// The truth value at `x`.
    pub fn value(&self, x: &Label) -> ClassicalResult<&Rat> {
        self.values
            .get(x)
            .ok_or_else(|| ClassicalError::UnknownLabel(x.clone()))
    }

    /// Iterates `(point, value)` pairs in label order (including zeros).
    pub fn iter(&self) -> impl Iterator<Item = (&Label, &Rat)> {
        self.values.iter()
    }

    /// The partial effect-module sum `p ⊎ q`, defined only when the pointwise
    /// sum never exceeds 1; otherwise [`ClassicalError::UndefinedSum`].
    pub fn partial_add(&self, other: &Predicate) -> ClassicalResult<Predicate> {
        if self.carrier != other.carrier {
            return Err(ClassicalError::SetMismatch("partial_add"));
        }
        let mut values = BTreeMap::new();
        for (x, v) in &self.values {
            let sum = v + other.value(x)?;
            if sum > Rat::one() {
                return Err(ClassicalError::UndefinedSum(x.clone()));
            }
            values.insert(x.clone(), sum);
        }
        Ok(Predicate {
            carrier: self.carrier.clone(),
            values,
        })
    }

    /// The orthocomplement `p⊥ = 1 − p`.
    pub fn complement(&self) -> Predicate {
        let values = self
            .values
            .iter()
            .map(|(x, v)| (x.clone(), Rat::one() - v))
            .collect();
        Predicate {
            carrier: self.carrier.clone(),
            values,
        }
    }

    /// The scalar action `r • p` for `r ∈ [0, 1]`.
    pub fn scale(&self, r: &Rat) -> ClassicalResult<Predicate> {
        if !in_unit_interval(r) {
            return Err(ClassicalError::ScalarOutOfRange(r.clone()));
        }
        let values = self
            .values
            .iter()
            .map(|(x, v)| (x.clone(), r * v))
            .collect();
        Ok(Predicate {
            carrier: self.carrier.clone(),
            values,
        })
    }

    /// The characteristic map `char_p : X → X + X` that routes each point to
    /// the left copy with weight `p(x)` and to the right copy with weight
    /// `1 − p(x)`.
    pub fn char_map(&self) -> KleisliMap {
        let target = self.carrier.coproduct(&self.carrier);
        KleisliMap::from_fn(self.carrier.clone(), target, |x| {
            let yes = self.values[x].clone();
            FiniteDistribution::new([
                (Label::left(x.clone()), yes.clone()),
                (Label::right(x.clone()), Rat::one() - yes),
            ])
            .expect("char weights sum to 1")
        })
        .expect("char rows stay inside X + X")
    }

    /// Lifts a predicate on `Y` to `X ⊗ Y` by ignoring the first component:
    /// `(x, y) ↦ q(y)`.  This turns a predicate on outcomes into one usable
    /// for conditioning a map with inputs.
    pub fn on_second(x: &FiniteSet, q: &Predicate) -> Predicate {
        let carrier = x.tensor(&q.carrier);
        let values = carrier
            .iter()
            .map(|xy| {
                let (_, y) = xy.as_pair().expect("tensor labels are pairs");
                (xy.clone(), q.values[y].clone())
            })
            .collect();
        Predicate { carrier, values }
    }
}

/// Substitution of a predicate along a stochastic map: for `f : X → Y` and
/// `q` on `Y`, the predicate `f*(q)` on `X` with `f*(q)(x) = Σᵢ rᵢ·q(yᵢ)`
/// where `f(x) = Σᵢ rᵢ|yᵢ⟩` — the expected truth value of `q` after running
/// `f` from `x`.
pub fn subst(f: &KleisliMap, q: &Predicate) -> ClassicalResult<Predicate> {
    if *f.target() != q.carrier {
        return Err(ClassicalError::SetMismatch("subst"));
    }
    let values: Vec<(Label, Rat)> = f
        .source()
        .iter()
        .map(|x| {
            let row = f.row(x)?;
            let expected = row
                .iter()
                .map(|(y, w)| Ok(w * q.value(y)?))
                .sum::<ClassicalResult<Rat>>()?;
            Ok((x.clone(), expected))
        })
        .collect::<ClassicalResult<_>>()?;
    Predicate::new(f.source().clone(), values)
}

/// The sharp predicate `Ω` on `X + X` that is 1 on the left copy and 0 on
/// the right copy.  Substituting `Ω` along `char_p` recovers `p`.
pub fn omega(x: &FiniteSet) -> Predicate {
    let carrier = x.coproduct(x);
    let values = carrier
        .iter()
        .map(|tagged| {
            let v = match tagged {
                Label::Left(_) => Rat::one(),
                _ => Rat::zero(),
            };
            (tagged.clone(), v)
        })
        .collect();
    Predicate { carrier, values }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (x, v)) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}: {v}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Predicate {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw<'a> {
            carrier: &'a FiniteSet,
            values: ValueMap<'a>,
        }
        struct ValueMap<'a>(&'a BTreeMap<Label, Rat>);
        impl Serialize for ValueMap<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(self.0.len()))?;
                for (x, v) in self.0 {
                    map.serialize_entry(&x.to_string(), &v.to_string())?;
                }
                map.end()
            }
        }
        Raw {
            carrier: &self.carrier,
            values: ValueMap(&self.values),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Predicate {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        #[derive(Deserialize)]
        struct Raw {
            carrier: FiniteSet,
            values: BTreeMap<String, String>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let mut values = Vec::with_capacity(raw.values.len());
        for (label, value) in raw.values {
            let label = Label::parse(&label).map_err(D::Error::custom)?;
            let value = crate::ratio::parse_rat(&value).map_err(D::Error::custom)?;
            values.push((label, value));
        }
        Predicate::new(raw.carrier, values).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{rat, rat_int};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn atoms(names: &[&str]) -> FiniteSet {
        FiniteSet::from_atoms(names.iter().copied()).unwrap()
    }

    /// Long-hair truth values on {M, W}: 3/10 for M, 8/10 for W.
    fn long_hair() -> Predicate {
        Predicate::new(
            atoms(&["M", "W"]),
            [
                (Label::atom("M"), rat(3, 10)),
                (Label::atom("W"), rat(8, 10)),
            ],
        )
        .unwrap()
    }

    fn random_predicate(rng: &mut ChaCha8Rng, carrier: &FiniteSet) -> Predicate {
        Predicate::new(
            carrier.clone(),
            carrier
                .iter()
                .map(|x| {
                    let den = rng.random_range(1..=12);
                    let num = rng.random_range(0..=den);
                    (x.clone(), rat(num, den))
                })
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn omitted_values_default_to_zero_and_range_is_checked() {
        let p = Predicate::new(atoms(&["M", "W"]), [(Label::atom("M"), rat(1, 2))]).unwrap();
        assert_eq!(*p.value(&Label::atom("W")).unwrap(), rat_int(0));
        assert!(matches!(
            Predicate::new(atoms(&["M"]), [(Label::atom("M"), rat(3, 2))]).unwrap_err(),
            ClassicalError::ValueOutOfRange { .. }
        ));
    }

    #[test]
    fn partial_sum_with_complement_is_truth() {
        let p = long_hair();
        assert_eq!(
            p.partial_add(&p.complement()).unwrap(),
            Predicate::truth(p.carrier().clone())
        );
    }

    #[test]
    fn partial_sum_is_undefined_past_one() {
        let p = long_hair();
        // 8/10 + 8/10 > 1 at W.
        assert_eq!(
            p.partial_add(&p).unwrap_err(),
            ClassicalError::UndefinedSum(Label::atom("W"))
        );
    }

    #[test]
    fn falsity_is_the_unit_of_the_partial_sum() {
        let p = long_hair();
        let zero = Predicate::falsity(p.carrier().clone());
        assert_eq!(p.partial_add(&zero).unwrap(), p);
    }

    #[test]
    fn complement_values_and_involution() {
        let p = long_hair();
        assert_eq!(*p.complement().value(&Label::atom("M")).unwrap(), rat(7, 10));
        assert_eq!(p.complement().complement(), p);
    }

    #[test]
    fn scaling_is_pointwise_and_range_checked() {
        let p = long_hair();
        let half = p.scale(&rat(1, 2)).unwrap();
        assert_eq!(*half.value(&Label::atom("W")).unwrap(), rat(2, 5));
        assert!(p.scale(&rat(3, 2)).is_err());
    }

    #[test]
    fn subst_takes_expected_truth_values() {
        // Along A ↦ 9/20 M + 11/20 W: expected long-hair value is
        // 9/20·3/10 + 11/20·8/10 = 115/200 = 23/40.
        let f = KleisliMap::new(
            atoms(&["A", "B"]),
            atoms(&["M", "W"]),
            [
                (
                    Label::atom("A"),
                    FiniteDistribution::new([
                        (Label::atom("M"), rat(9, 20)),
                        (Label::atom("W"), rat(11, 20)),
                    ])
                    .unwrap(),
                ),
                (
                    Label::atom("B"),
                    FiniteDistribution::new([
                        (Label::atom("M"), rat(1, 2)),
                        (Label::atom("W"), rat(1, 2)),
                    ])
                    .unwrap(),
                ),
            ],
        )
        .unwrap();
        let expected = subst(&f, &long_hair()).unwrap();
        assert_eq!(*expected.value(&Label::atom("A")).unwrap(), rat(23, 40));
        assert_eq!(*expected.value(&Label::atom("B")).unwrap(), rat(11, 20));
    }

    #[test]
    fn subst_along_identity_is_identity() {
        let p = long_hair();
        assert_eq!(subst(&KleisliMap::identity(p.carrier()), &p).unwrap(), p);
    }

    #[test]
    fn subst_is_an_effect_module_morphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let x = atoms(&["a", "b", "c"]);
        let y = atoms(&["u", "v"]);
        for _ in 0..100 {
            let f = KleisliMap::from_fn(x.clone(), y.clone(), |_| {
                let w = rat(rng.random_range(0..=8), 8);
                FiniteDistribution::new([
                    (Label::atom("u"), w.clone()),
                    (Label::atom("v"), rat_int(1) - w),
                ])
                .unwrap()
            })
            .unwrap();
            let p = random_predicate(&mut rng, &y);
            let q = random_predicate(&mut rng, &y);
            // Complements and scalars pass through substitution.
            assert_eq!(
                subst(&f, &p.complement()).unwrap(),
                subst(&f, &p).unwrap().complement()
            );
            let r = rat(rng.random_range(0..=5), 5);
            assert_eq!(
                subst(&f, &p.scale(&r).unwrap()).unwrap(),
                subst(&f, &p).unwrap().scale(&r).unwrap()
            );
            // Partial sums pass through whenever defined.
            if let Ok(sum) = p.partial_add(&q) {
                assert_eq!(
                    subst(&f, &sum).unwrap(),
                    subst(&f, &p)
                        .unwrap()
                        .partial_add(&subst(&f, &q).unwrap())
                        .unwrap()
                );
            }
        }
    }

    #[test]
    fn omega_is_sharp_on_the_left_copy() {
        let x = atoms(&["M", "W"]);
        let om = omega(&x);
        assert_eq!(
            *om.value(&Label::left(Label::atom("M"))).unwrap(),
            rat_int(1)
        );
        assert_eq!(
            *om.value(&Label::right(Label::atom("W"))).unwrap(),
            rat_int(0)
        );
        assert_eq!(om.complement(), omega(&x).complement());
    }

    #[test]
    fn char_map_weights_the_two_copies() {
        let p = long_hair();
        let ch = p.char_map();
        let row = ch.row(&Label::atom("M")).unwrap();
        assert_eq!(row.weight(&Label::left(Label::atom("M"))), rat(3, 10));
        assert_eq!(row.weight(&Label::right(Label::atom("M"))), rat(7, 10));
    }

    #[test]
    fn char_map_of_truth_is_the_left_injection() {
        let x = atoms(&["M", "W"]);
        let ch = Predicate::truth(x.clone()).char_map();
        let kappa1 =
            KleisliMap::from_function(x.clone(), x.coproduct(&x), |p| Label::left(p.clone()))
                .unwrap();
        assert_eq!(ch, kappa1);
    }

    #[test]
    fn substituting_omega_along_char_recovers_the_predicate() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let x = atoms(&["a", "b", "c", "d"]);
        for _ in 0..1000 {
            let p = random_predicate(&mut rng, &x);
            assert_eq!(subst(&p.char_map(), &omega(&x)).unwrap(), p);
        }
    }

    #[test]
    fn on_second_ignores_the_first_component() {
        let c = atoms(&["A", "B"]);
        let lifted = Predicate::on_second(&c, &long_hair());
        assert_eq!(
            *lifted.value(&Label::parse("(A,W)").unwrap()).unwrap(),
            rat(8, 10)
        );
        assert_eq!(
            *lifted.value(&Label::parse("(B,M)").unwrap()).unwrap(),
            rat(3, 10)
        );
    }

    #[test]
    fn serde_round_trips() {
        let p = long_hair();
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(serde_json::from_str::<Predicate>(&json).unwrap(), p);
        let bad = r#"{"carrier": ["M"], "values": {"M": "7/5"}}"#;
        assert!(serde_json::from_str::<Predicate>(bad).is_err());
    }
}
