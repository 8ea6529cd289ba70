//! Finitely supported distributions with exact rational weights.
//!
//! A [`FiniteDistribution`] is a formal convex sum `r₁|x₁⟩ + … + rₖ|xₖ⟩`:
//! weights are strictly positive rationals summing to exactly 1, and points
//! with weight zero are simply absent, so equality of distributions is
//! structural equality.  The three monad primitives live here: [point
//! masses](FiniteDistribution::dirac), [pushforward along a
//! function](FiniteDistribution::map), and [flattening a convex combination
//! of distributions](FiniteDistribution::mix).

use crate::error::{ClassicalError, ClassicalResult};
use crate::label::Label;
use crate::ratio::{rat_int, Rat};
use crate::set::FiniteSet;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;

/// A finitely supported probability distribution over labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteDistribution {
    weights: BTreeMap<Label, Rat>,
}

impl FiniteDistribution {
    /// Builds a distribution from weighted points.
    ///
    /// Duplicate labels are merged by adding their weights, zero weights are
    /// dropped, negative weights are rejected, and the total must be exactly 1.
    pub fn new(weights: impl IntoIterator<Item = (Label, Rat)>) -> ClassicalResult<Self> {
        let mut merged: BTreeMap<Label, Rat> = BTreeMap::new();
        for (label, weight) in weights {
            if weight.is_negative() {
                return Err(ClassicalError::ValueOutOfRange {
                    label,
                    value: weight,
                });
            }
            *merged.entry(label).or_insert_with(Rat::zero) += weight;
        }
        merged.retain(|_, w| !w.is_zero());
        let total: Rat = merged.values().cloned().sum();
        if !total.is_one() {
            return Err(ClassicalError::NotNormalized(total));
        }
        Ok(FiniteDistribution { weights: merged })
    }

    /// The point mass at `x`.
    pub fn dirac(x: Label) -> Self {
        FiniteDistribution {
            weights: BTreeMap::from([(x, rat_int(1))]),
        }
    }

    /// The point mass at `x`, checked to be a member of `set`.
    pub fn dirac_in(x: &Label, set: &FiniteSet) -> ClassicalResult<Self> {
        set.expect_member(x)?;
        Ok(Self::dirac(x.clone()))
    }

    /// The uniform distribution over a (nonempty) set.
    pub fn uniform(set: &FiniteSet) -> ClassicalResult<Self> {
        let n = set.len();
        if n == 0 {
            return Err(ClassicalError::EmptySet);
        }
        let w = Rat::new(1.into(), (n as i64).into());
        Ok(FiniteDistribution {
            weights: set.iter().map(|x| (x.clone(), w.clone())).collect(),
        })
    }

    /// The weight of `x` (zero off the support).
    pub fn weight(&self, x: &Label) -> Rat {
        self.weights.get(x).cloned().unwrap_or_else(Rat::zero)
    }

    /// Iterates `(point, weight)` pairs over the support in label order.
    pub fn iter(&self) -> impl Iterator<Item = (&Label, &Rat)> {
        self.weights.iter()
    }

    /// The support, in label order.
    pub fn support(&self) -> impl Iterator<Item = &Label> {
        self.weights.keys()
    }

    /// Returns the point if this is a point mass.
    pub fn as_dirac(&self) -> Option<&Label> {
        if self.weights.len() == 1 {
            self.weights.keys().next()
        } else {
            None
        }
    }

    /// Pushforward along a function on labels, merging collisions.
    pub fn map<F: Fn(&Label) -> Label>(&self, f: F) -> Self {
        let mut weights: BTreeMap<Label, Rat> = BTreeMap::new();
        for (x, w) in &self.weights {
            *weights.entry(f(x)).or_insert_with(Rat::zero) += w.clone();
        }
        FiniteDistribution { weights }
    }

    /// Pushforward checked against a declared target set.
    pub fn map_into<F: Fn(&Label) -> Label>(
        &self,
        f: F,
        target: &FiniteSet,
    ) -> ClassicalResult<Self> {
        let pushed = self.map(f);
        for x in pushed.support() {
            target.expect_member(x)?;
        }
        Ok(pushed)
    }

    /// Flattens a formal convex combination of distributions:
    /// `mix([(r₁, φ₁), …])` is `Σᵢ rᵢ·φᵢ`.
    ///
    /// The outer weights must themselves be non-negative and sum to 1; inner
    /// distributions are already normalized by construction.
    pub fn mix(
        parts: impl IntoIterator<Item = (Rat, FiniteDistribution)>,
    ) -> ClassicalResult<Self> {
        let mut outer_total = Rat::zero();
        let mut weights: BTreeMap<Label, Rat> = BTreeMap::new();
        for (r, dist) in parts {
            if r.is_negative() {
                return Err(ClassicalError::NotNormalized(r));
            }
            outer_total += r.clone();
            for (x, w) in &dist.weights {
                *weights.entry(x.clone()).or_insert_with(Rat::zero) += r.clone() * w;
            }
        }
        if !outer_total.is_one() {
            return Err(ClassicalError::NotNormalized(outer_total));
        }
        weights.retain(|_, w| !w.is_zero());
        FiniteDistribution::new(weights)
    }
}

impl fmt::Display for FiniteDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (x, w)) in self.weights.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{w}|{x}>")?;
        }
        Ok(())
    }
}

impl Serialize for FiniteDistribution {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.weights.len()))?;
        for (x, w) in &self.weights {
            map.serialize_entry(&x.to_string(), &w.to_string())?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for FiniteDistribution {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = BTreeMap::<String, String>::deserialize(deserializer)?;
        let mut weights = Vec::with_capacity(raw.len());
        for (label, weight) in raw {
            let label = Label::parse(&label).map_err(D::Error::custom)?;
            let weight = crate::ratio::parse_rat(&weight).map_err(D::Error::custom)?;
            weights.push((label, weight));
        }
        FiniteDistribution::new(weights).map_err(D::Error::custom)
    }
}
