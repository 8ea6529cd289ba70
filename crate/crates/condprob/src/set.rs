//! Finite sets of labels.
//!
//! A [`FiniteSet`] is an ordered list of distinct labels.  Order is part of
//! the data: it fixes how derived sets enumerate their points (sums
//! concatenate, tensors run in row-major order with the left factor slowest),
//! which keeps every serialization deterministic.

use crate::error::{ClassicalError, ClassicalResult};
use crate::label::Label;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeSet;
use std::fmt;

/// An ordered finite set of distinct labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSet {
    elements: Vec<Label>,
}

impl FiniteSet {
    /// Builds a set from an ordered list of labels, rejecting duplicates.
    pub fn new(elements: impl IntoIterator<Item = Label>) -> ClassicalResult<Self> {
        let elements: Vec<Label> = elements.into_iter().collect();
        let mut seen = BTreeSet::new();
        for label in &elements {
            if !seen.insert(label.clone()) {
                return Err(ClassicalError::DuplicateLabel(label.clone()));
            }
        }
        Ok(FiniteSet { elements })
    }

    /// Builds a set of atoms from plain names.
    pub fn from_atoms<I>(names: I) -> ClassicalResult<Self>
    where
        I: IntoIterator,
        I::Item: Into<String>,
    {
        Self::new(names.into_iter().map(|n| Label::atom(n)))
    }

    /// The one-point set used as the trivial input of a non-parametrized
    /// model.  Its single point is the atom `*`.
    pub fn unit() -> Self {
        FiniteSet {
            elements: vec![Label::Atom("*".to_owned())],
        }
    }

    /// Number of elements.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    /// True when the set has no elements.
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Iterates the elements in declaration order.
    pub fn iter(&self) -> impl Iterator<Item = &Label> {
        self.elements.iter()
    }

    /// True when `label` is an element.
    pub fn contains(&self, label: &Label) -> bool {
        self.elements.contains(label)
    }

    /// Errors with [`ClassicalError::UnknownLabel`] unless `label` is an element.
    pub fn expect_member(&self, label: &Label) -> ClassicalResult<()> {
        if self.contains(label) {
            Ok(())
        } else {
            Err(ClassicalError::UnknownLabel(label.clone()))
        }
    }

    /// The sum `X + Y`: left elements tagged `k1:`, then right tagged `k2:`.
    pub fn coproduct(&self, other: &FiniteSet) -> FiniteSet {
        let elements = self
            .iter()
            .cloned()
            .map(Label::left)
            .chain(other.iter().cloned().map(Label::right))
            .collect();
        FiniteSet { elements }
    }

    /// The tensor `X ⊗ Y`: pair labels in row-major order (left factor
    /// slowest).
    pub fn tensor(&self, other: &FiniteSet) -> FiniteSet {
        let elements = self
            .iter()
            .flat_map(|x| other.iter().map(move |y| Label::pair(x.clone(), y.clone())))
            .collect();
        FiniteSet { elements }
    }

    /// Recovers a tensor factor from a set of pair labels: `0` gives the set
    /// of first components, `1` the second, each in order of first occurrence.
    pub fn tensor_factor(&self, index: usize) -> ClassicalResult<FiniteSet> {
        let mut elements: Vec<Label> = Vec::new();
        for label in self.iter() {
            let (a, b) = label
                .as_pair()
                .ok_or_else(|| ClassicalError::NotATensor(label.clone()))?;
            let component = if index == 0 { a } else { b };
            if !elements.contains(component) {
                elements.push(component.clone());
            }
        }
        Ok(FiniteSet { elements })
    }
}

impl fmt::Display for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, label) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{label}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for FiniteSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.elements.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FiniteSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let elements = Vec::<Label>::deserialize(deserializer)?;
        FiniteSet::new(elements).map_err(serde::de::Error::custom)
    }
}
