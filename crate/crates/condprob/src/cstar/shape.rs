//! Shapes of finite-dimensional operator algebras.

use crate::error::{CstarError, CstarResult};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

/// The shape of a finite direct sum of full matrix algebras: the ordered
/// list of block dimensions.  `[n]` is the `n × n` matrix algebra, `[1, 1]`
/// the commutative algebra of pairs of scalars, and so on.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraShape {
    blocks: Vec<usize>,
}

impl AlgebraShape {
    /// Builds a shape from block dimensions; at least one block, all
    /// dimensions positive.
    pub fn new(blocks: impl Into<Vec<usize>>) -> CstarResult<Self> {
        let blocks = blocks.into();
        if blocks.is_empty() || blocks.iter().any(|&n| n == 0) {
            return Err(CstarError::BadShape);
        }
        Ok(AlgebraShape { blocks })
    }

    /// The full matrix algebra on an `n`-dimensional space.
    pub fn full(n: usize) -> CstarResult<Self> {
        Self::new([n])
    }

    /// The commutative algebra of `k`-tuples of scalars.
    pub fn scalars(k: usize) -> CstarResult<Self> {
        Self::new(vec![1; k])
    }

    /// The block dimensions.
    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    /// Number of blocks.
    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Dimension of the algebra as a vector space: `Σ nᵢ²`.  This is the
    /// length of a vectorized element.
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|n| n * n).sum()
    }

    /// Offset of block `i` in a vectorized element.
    pub(crate) fn block_offset(&self, i: usize) -> usize {
        self.blocks[..i].iter().map(|n| n * n).sum()
    }

    /// The tensor product shape: blocks `nᵢ·mⱼ` ordered lexicographically
    /// with the left factor's index slowest.
    pub fn tensor(&self, other: &AlgebraShape) -> AlgebraShape {
        let blocks = self
            .blocks
            .iter()
            .flat_map(|n| other.blocks.iter().map(move |m| n * m))
            .collect();
        AlgebraShape { blocks }
    }

    /// The direct sum shape: concatenated block lists.
    pub fn direct_sum(&self, other: &AlgebraShape) -> AlgebraShape {
        let blocks = self
            .blocks
            .iter()
            .chain(other.blocks.iter())
            .copied()
            .collect();
        AlgebraShape { blocks }
    }

    /// The shape of the center: one scalar per block.
    pub fn center(&self) -> AlgebraShape {
        AlgebraShape {
            blocks: vec![1; self.blocks.len()],
        }
    }

    /// True when every block is one-dimensional, i.e. the algebra is
    /// commutative.
    pub fn is_commutative(&self) -> bool {
        self.blocks.iter().all(|&n| n == 1)
    }
}

impl fmt::Display for AlgebraShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, n) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, "]")
    }
}

impl Serialize for AlgebraShape {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.blocks.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for AlgebraShape {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let blocks = Vec::<usize>::deserialize(deserializer)?;
        AlgebraShape::new(blocks).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_and_zero_blocks() {
        assert_eq!(AlgebraShape::new(Vec::new()).unwrap_err(), CstarError::BadShape);
        assert_eq!(AlgebraShape::new([2, 0]).unwrap_err(), CstarError::BadShape);
    }

    #[test]
    fn dimension_counts_matrix_entries() {
        assert_eq!(AlgebraShape::new([2]).unwrap().dim(), 4);
        assert_eq!(AlgebraShape::new([2, 1]).unwrap().dim(), 5);
        assert_eq!(AlgebraShape::new([6, 6]).unwrap().dim(), 72);
    }

    #[test]
    fn tensor_is_blockwise_lexicographic() {
        let a = AlgebraShape::new([2, 1]).unwrap();
        let b = AlgebraShape::new([3, 2]).unwrap();
        assert_eq!(a.tensor(&b).blocks(), &[6, 4, 3, 2]);
        // The three-system compound used by the interferometer model.
        let exp = AlgebraShape::scalars(2).unwrap();
        let photon = AlgebraShape::full(3).unwrap();
        let device = AlgebraShape::full(2).unwrap();
        let total = exp.tensor(&photon).tensor(&device);
        assert_eq!(total.blocks(), &[6, 6]);
        assert_eq!(total.dim(), 72);
    }

    #[test]
    fn direct_sum_concatenates() {
        let a = AlgebraShape::new([2]).unwrap();
        assert_eq!(a.direct_sum(&a).blocks(), &[2, 2]);
    }

    #[test]
    fn center_has_one_scalar_per_block() {
        let a = AlgebraShape::new([3]).unwrap();
        assert_eq!(a.center().blocks(), &[1]);
        let b = AlgebraShape::new([2, 3, 1]).unwrap();
        assert_eq!(b.center().blocks(), &[1, 1, 1]);
        assert!(b.center().is_commutative());
        let c = AlgebraShape::scalars(2).unwrap();
        assert_eq!(c.center(), c);
    }

    #[test]
    fn serde_round_trips_and_revalidates() {
        let a = AlgebraShape::new([2, 1]).unwrap();
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, "[2,1]");
        assert_eq!(serde_json::from_str::<AlgebraShape>(&json).unwrap(), a);
        assert!(serde_json::from_str::<AlgebraShape>("[]").is_err());
        assert!(serde_json::from_str::<AlgebraShape>("[2,0]").is_err());
    }
}
