//! Stochastic maps between finite sets, composed Kleisli-style.
//!
//! A [`KleisliMap`] `f : X → Y` assigns each point of `X` a distribution on
//! `Y` — a row-stochastic table with exact rational entries.  Composition
//! `g ⊙ f` pushes each row of `f` through `g` and flattens, which is exactly
//! matrix multiplication of the stochastic tables.  On top of composition the
//! module provides the structural maps the conditioning pipeline is built
//! from: [graphs](KleisliMap::graph) `X → X ⊗ Y` that remember their input,
//! [marginals](KleisliMap::marginal) that forget a tensor component, and
//! [sums of maps](KleisliMap::coproduct_map) acting on tagged unions.

use crate::dist::FiniteDistribution;
use crate::error::{ClassicalError, ClassicalResult};
use crate::label::Label;
use crate::set::FiniteSet;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Which tensor component an operation should act on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    /// The left factor of `X ⊗ Y`.
    First,
    /// The right factor of `X ⊗ Y`.
    Second,
}

/// A stochastic map `X → Y`: one distribution on `Y` per point of `X`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawKleisliMap", into = "RawKleisliMap")]
pub struct KleisliMap {
    source: FiniteSet,
    target: FiniteSet,
    rows: BTreeMap<Label, FiniteDistribution>,
}

/// Serialization form of a stochastic map; validated on the way in.
#[derive(Clone, Serialize, Deserialize)]
struct RawKleisliMap {
    source: FiniteSet,
    target: FiniteSet,
    rows: BTreeMap<Label, FiniteDistribution>,
}

impl TryFrom<RawKleisliMap> for KleisliMap {
    type Error = ClassicalError;

    fn try_from(raw: RawKleisliMap) -> ClassicalResult<Self> {
        KleisliMap::new(raw.source, raw.target, raw.rows)
    }
}

impl From<KleisliMap> for RawKleisliMap {
    fn from(map: KleisliMap) -> Self {
        RawKleisliMap {
            source: map.source,
            target: map.target,
            rows: map.rows,
        }
    }
}

impl KleisliMap {
    /// Builds a stochastic map from a row table.
    ///
    /// The table must have exactly one row per source point, and every row's
    /// support must lie inside the target set.
    pub fn new(
        source: FiniteSet,
        target: FiniteSet,
        rows: impl IntoIterator<Item = (Label, FiniteDistribution)>,
    ) -> ClassicalResult<Self> {
        let rows: BTreeMap<Label, FiniteDistribution> = rows.into_iter().collect();
        for x in rows.keys() {
            source.expect_member(x)?;
        }
        for x in source.iter() {
            if !rows.contains_key(x) {
                return Err(ClassicalError::UnknownLabel(x.clone()));
            }
        }
        for dist in rows.values() {
            for y in dist.support() {
                target.expect_member(y)?;
            }
        }
        Ok(KleisliMap {
            source,
            target,
            rows,
        })
    }

    /// Builds a map by evaluating a closure at every source point.
    pub fn from_fn(
        source: FiniteSet,
        target: FiniteSet,
        mut f: impl FnMut(&Label) -> FiniteDistribution,
    ) -> ClassicalResult<Self> {
        let rows: Vec<(Label, FiniteDistribution)> =
            source.iter().map(|x| (x.clone(), f(x))).collect();
        Self::new(source, target, rows)
    }

    /// Lifts an ordinary function on labels to a point-mass-valued map.
    pub fn from_function(
        source: FiniteSet,
        target: FiniteSet,
        f: impl Fn(&Label) -> Label,
    ) -> ClassicalResult<Self> {
        Self::from_fn(source, target, |x| FiniteDistribution::dirac(f(x)))
    }

    /// The identity map on `set`.
    pub fn identity(set: &FiniteSet) -> Self {
        let rows = set
            .iter()
            .map(|x| (x.clone(), FiniteDistribution::dirac(x.clone())))
            .collect();
        KleisliMap {
            source: set.clone(),
            target: set.clone(),
            rows,
        }
    }

    /// Wraps a single distribution as a map out of the one-point set.
    pub fn from_distribution(target: FiniteSet, dist: FiniteDistribution) -> ClassicalResult<Self> {
        let unit = FiniteSet::unit();
        let point = unit.iter().next().expect("unit set has a point").clone();
        Self::new(unit, target, [(point, dist)])
    }

    /// The source set.
    pub fn source(&self) -> &FiniteSet {
        &self.source
    }

    /// The target set.
    pub fn target(&self) -> &FiniteSet {
        &self.target
    }

    /// The row at `x`.
    pub fn row(&self, x: &Label) -> ClassicalResult<&FiniteDistribution> {
        self.rows
            .get(x)
            .ok_or_else(|| ClassicalError::UnknownLabel(x.clone()))
    }

    /// Pushes a distribution on the source through the map and flattens.
    pub fn apply(&self, dist: &FiniteDistribution) -> ClassicalResult<FiniteDistribution> {
        let parts: Vec<_> = dist
            .iter()
            .map(|(x, w)| Ok((w.clone(), self.row(x)?.clone())))
            .collect::<ClassicalResult<_>>()?;
        FiniteDistribution::mix(parts)
    }

    /// Kleisli composition `g ⊙ f : X → Z` for `f : X → Y`, `g : Y → Z`.
    pub fn compose(g: &KleisliMap, f: &KleisliMap) -> ClassicalResult<KleisliMap> {
        if f.target != g.source {
            return Err(ClassicalError::SetMismatch("compose"));
        }
        let rows: Vec<(Label, FiniteDistribution)> = f
            .rows
            .iter()
            .map(|(x, row)| Ok((x.clone(), g.apply(row)?)))
            .collect::<ClassicalResult<_>>()?;
        KleisliMap::new(f.source.clone(), g.target.clone(), rows)
    }

    /// The graph `gr(f) : X → X ⊗ Y`, pairing each input with its outcome:
    /// `x ↦ Σᵢ rᵢ |(x, yᵢ)⟩` where `f(x) = Σᵢ rᵢ |yᵢ⟩`.
    pub fn graph(&self) -> KleisliMap {
        let target = self.source.tensor(&self.target);
        let rows = self
            .rows
            .iter()
            .map(|(x, row)| {
                let paired = row.map(|y| Label::pair(x.clone(), y.clone()));
                (x.clone(), paired)
            })
            .collect();
        KleisliMap {
            source: self.source.clone(),
            target,
            rows,
        }
    }

    /// Inverts [`KleisliMap::graph`]: given `g : X → X ⊗ Y` whose first
    /// marginal is the identity, recovers `f : X → Y` with `gr(f) = g`.
    pub fn ungraph(g: &KleisliMap) -> ClassicalResult<KleisliMap> {
        let first = g.marginal(Component::First)?;
        if first != KleisliMap::identity(&g.source) {
            return Err(ClassicalError::NotAGraph);
        }
        let target = g.target.tensor_factor(1)?;
        let rows: Vec<(Label, FiniteDistribution)> = g
            .rows
            .iter()
            .map(|(x, row)| {
                let second = row.map(|xy| {
                    let (_, y) = xy.as_pair().expect("target checked to be a tensor");
                    y.clone()
                });
                (x.clone(), second)
            })
            .collect();
        KleisliMap::new(g.source.clone(), target, rows)
    }

    /// Forgets one tensor component of the target: for `f : X → Y₁ ⊗ Y₂`
    /// this is `πᵢ ⊙ f : X → Yᵢ`.
    pub fn marginal(&self, component: Component) -> ClassicalResult<KleisliMap> {
        let index = match component {
            Component::First => 0,
            Component::Second => 1,
        };
        let target = self.target.tensor_factor(index)?;
        let rows: Vec<(Label, FiniteDistribution)> = self
            .rows
            .iter()
            .map(|(x, row)| {
                let projected = row.map(|xy| {
                    let (a, b) = xy.as_pair().expect("target checked to be a tensor");
                    if index == 0 {
                        a.clone()
                    } else {
                        b.clone()
                    }
                });
                (x.clone(), projected)
            })
            .collect();
        KleisliMap::new(self.source.clone(), target, rows)
    }

    /// The sum of two maps, `f + g : X₁ + X₂ → Y₁ + Y₂`, acting as `f` on
    /// `k1:`-tagged points and as `g` on `k2:`-tagged points.
    pub fn coproduct_map(f: &KleisliMap, g: &KleisliMap) -> ClassicalResult<KleisliMap> {
        let source = f.source.coproduct(&g.source);
        let target = f.target.coproduct(&g.target);
        let rows: Vec<(Label, FiniteDistribution)> = source
            .iter()
            .map(|tagged| {
                let row = match tagged {
                    Label::Left(x) => f.row(x)?.map(|y| Label::left(y.clone())),
                    Label::Right(x) => g.row(x)?.map(|y| Label::right(y.clone())),
                    other => return Err(ClassicalError::UnknownLabel(other.clone())),
                };
                Ok((tagged.clone(), row))
            })
            .collect::<ClassicalResult<_>>()?;
        KleisliMap::new(source, target, rows)
    }
}
