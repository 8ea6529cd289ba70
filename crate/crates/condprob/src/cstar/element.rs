//! Elements of block-matrix algebras.

use super::shape::AlgebraShape;
use super::{C, TOL_HERM, TOL_POS};
use crate::error::{CstarError, CstarResult};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An element of a block-matrix algebra: one complex matrix per block of the
/// shape.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    shape: AlgebraShape,
    blocks: Vec<DMatrix<C>>,
}

impl AlgebraElement {
    /// Wraps explicit block matrices, checking them against the shape.
    pub fn from_blocks(shape: AlgebraShape, blocks: Vec<DMatrix<C>>) -> CstarResult<Self> {
        if blocks.len() != shape.num_blocks()
            || shape
                .blocks()
                .iter()
                .zip(&blocks)
                .any(|(&n, b)| b.nrows() != n || b.ncols() != n)
        {
            return Err(CstarError::ShapeMismatch("element blocks"));
        }
        Ok(AlgebraElement { shape, blocks })
    }

    /// The zero element.
    pub fn zeros(shape: &AlgebraShape) -> Self {
        let blocks = shape
            .blocks()
            .iter()
            .map(|&n| DMatrix::zeros(n, n))
            .collect();
        AlgebraElement {
            shape: shape.clone(),
            blocks,
        }
    }

    /// The multiplicative unit: identity in every block.
    pub fn unit(shape: &AlgebraShape) -> Self {
        let blocks = shape
            .blocks()
            .iter()
            .map(|&n| DMatrix::identity(n, n))
            .collect();
        AlgebraElement {
            shape: shape.clone(),
            blocks,
        }
    }

    /// The central element with scalar `values[i]` in block `i`.
    pub fn from_center_values(shape: &AlgebraShape, values: &[C]) -> CstarResult<Self> {
        if values.len() != shape.num_blocks() {
            return Err(CstarError::ShapeMismatch("center values"));
        }
        let blocks = shape
            .blocks()
            .iter()
            .zip(values)
            .map(|(&n, &v)| DMatrix::identity(n, n) * v)
            .collect();
        Ok(AlgebraElement {
            shape: shape.clone(),
            blocks,
        })
    }

    /// The `k`-th basis element: a single matrix unit, enumerated block by
    /// block in shape order and column-major within each block.
    pub fn basis_element(shape: &AlgebraShape, k: usize) -> Self {
        let mut elem = Self::zeros(shape);
        let mut offset = 0;
        for (i, &n) in shape.blocks().iter().enumerate() {
            if k < offset + n * n {
                let local = k - offset;
                let (col, row) = (local / n, local % n);
                elem.blocks[i][(row, col)] = C::new(1.0, 0.0);
                return elem;
            }
            offset += n * n;
        }
        panic!("basis index {k} out of range for shape {shape}");
    }

    /// The shape this element lives in.
    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    /// The block matrices.
    pub fn blocks(&self) -> &[DMatrix<C>] {
        &self.blocks
    }

    /// A single block.
    pub fn block(&self, i: usize) -> &DMatrix<C> {
        &self.blocks[i]
    }

    /// Mutable access to a single block.
    pub fn block_mut(&mut self, i: usize) -> &mut DMatrix<C> {
        &mut self.blocks[i]
    }

    fn zip_blocks(
        &self,
        other: &AlgebraElement,
        op: impl Fn(&DMatrix<C>, &DMatrix<C>) -> DMatrix<C>,
        ctx: &'static str,
    ) -> CstarResult<AlgebraElement> {
        if self.shape != other.shape {
            return Err(CstarError::ShapeMismatch(ctx));
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| op(a, b))
            .collect();
        Ok(AlgebraElement {
            shape: self.shape.clone(),
            blocks,
        })
    }

    /// Blockwise sum.
    pub fn add(&self, other: &AlgebraElement) -> CstarResult<AlgebraElement> {
        self.zip_blocks(other, |a, b| a + b, "add")
    }

    /// Blockwise difference.
    pub fn sub(&self, other: &AlgebraElement) -> CstarResult<AlgebraElement> {
        self.zip_blocks(other, |a, b| a - b, "sub")
    }

    /// Blockwise matrix product.
    pub fn mul(&self, other: &AlgebraElement) -> CstarResult<AlgebraElement> {
        self.zip_blocks(other, |a, b| a * b, "mul")
    }

    /// Scalar multiple.
    pub fn scale(&self, c: C) -> AlgebraElement {
        let blocks = self.blocks.iter().map(|b| b * c).collect();
        AlgebraElement {
            shape: self.shape.clone(),
            blocks,
        }
    }

    /// The adjoint (blockwise conjugate transpose).
    pub fn adjoint(&self) -> AlgebraElement {
        let blocks = self.blocks.iter().map(|b| b.adjoint()).collect();
        AlgebraElement {
            shape: self.shape.clone(),
            blocks,
        }
    }

    /// The trace, summed over blocks.
    pub fn trace(&self) -> C {
        self.blocks.iter().map(|b| b.trace()).sum()
    }

    /// `‖a − a*‖` in Frobenius norm, the distance from being Hermitian.
    pub fn herm_defect(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| (b - b.adjoint()).norm())
            .fold(0.0, f64::max)
    }

    /// True when the element is Hermitian within `tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.herm_defect() <= tol
    }

    /// The operator norm: largest singular value over all blocks.
    pub fn op_norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| {
                if b.is_empty() {
                    0.0
                } else {
                    b.clone().singular_values().max()
                }
            })
            .fold(0.0, f64::max)
    }

    /// Eigenvalues of a Hermitian element, per block, each sorted ascending.
    pub fn hermitian_eigenvalues(&self) -> CstarResult<Vec<Vec<f64>>> {
        let defect = self.herm_defect();
        if defect > TOL_HERM {
            return Err(CstarError::NotHermitian { defect });
        }
        Ok(self
            .blocks
            .iter()
            .map(|b| {
                let mut ls: Vec<f64> = b
                    .clone()
                    .symmetric_eigen()
                    .eigenvalues
                    .iter()
                    .copied()
                    .collect();
                ls.sort_by(f64::total_cmp);
                ls
            })
            .collect())
    }

    /// The smallest eigenvalue across blocks (element must be Hermitian).
    pub fn min_eigenvalue(&self) -> CstarResult<f64> {
        Ok(self
            .hermitian_eigenvalues()?
            .iter()
            .flatten()
            .copied()
            .fold(f64::INFINITY, f64::min))
    }

    /// True when the element is Hermitian and its spectrum is at or above
    /// `−tol`.
    pub fn is_positive(&self, tol: f64) -> bool {
        match self.min_eigenvalue() {
            Ok(min) => min >= -tol,
            Err(_) => false,
        }
    }

    /// Applies a real function to the spectrum of a Hermitian element:
    /// eigendecompose each block, map the eigenvalues, reassemble.
    fn spectral_map(&self, f: impl Fn(f64) -> CstarResult<f64>) -> CstarResult<AlgebraElement> {
        let defect = self.herm_defect();
        if defect > TOL_HERM {
            return Err(CstarError::NotHermitian { defect });
        }
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                let eig = b.clone().symmetric_eigen();
                let mapped: CstarResult<Vec<f64>> =
                    eig.eigenvalues.iter().map(|&l| f(l)).collect();
                let diag =
                    DMatrix::from_diagonal(&DVector::from_iterator(
                        b.nrows(),
                        mapped?.into_iter().map(|l| C::new(l, 0.0)),
                    ));
                Ok(&eig.eigenvectors * diag * eig.eigenvectors.adjoint())
            })
            .collect::<CstarResult<Vec<_>>>()?;
        Ok(AlgebraElement {
            shape: self.shape.clone(),
            blocks,
        })
    }

    /// The positive square root `√a` of a positive element.  Eigenvalues
    /// within `TOL_POS` of zero are clamped to exactly zero — otherwise the
    /// square root would amplify rounding noise on a zero eigenvalue from
    /// `ε` to `√ε`, visibly blurring sharp effects.  Anything below
    /// `−TOL_POS` is rejected as [`CstarError::NotPositive`].
    pub fn positive_sqrt(&self) -> CstarResult<AlgebraElement> {
        self.spectral_map(|l| {
            if l <= -TOL_POS {
                Err(CstarError::NotPositive { min_eigenvalue: l })
            } else if l <= TOL_POS {
                Ok(0.0)
            } else {
                Ok(l.sqrt())
            }
        })
    }

    /// The inverse positive square root `a^{−1/2}`; requires every
    /// eigenvalue strictly above [`super::INV_TOL`].
    pub fn inv_positive_sqrt(&self) -> CstarResult<AlgebraElement> {
        self.spectral_map(|l| {
            if l <= super::INV_TOL {
                Err(CstarError::NotInvertible { min_eigenvalue: l })
            } else {
                Ok(1.0 / l.sqrt())
            }
        })
    }

    /// The tensor product of two elements: blockwise Kronecker products in
    /// the lexicographic block order of the tensor shape.
    pub fn tensor(&self, other: &AlgebraElement) -> AlgebraElement {
        let shape = self.shape.tensor(&other.shape);
        let blocks = self
            .blocks
            .iter()
            .flat_map(|a| other.blocks.iter().map(move |b| a.kronecker(b)))
            .collect();
        AlgebraElement { shape, blocks }
    }

    /// The pair `(self, other)` as an element of the direct sum algebra.
    pub fn direct_sum(&self, other: &AlgebraElement) -> AlgebraElement {
        let shape = self.shape.direct_sum(&other.shape);
        let blocks = self
            .blocks
            .iter()
            .chain(other.blocks.iter())
            .cloned()
            .collect();
        AlgebraElement { shape, blocks }
    }

    /// Splits an element of `A ⊕ B` back into its two halves.
    pub fn split(
        &self,
        a: &AlgebraShape,
        b: &AlgebraShape,
    ) -> CstarResult<(AlgebraElement, AlgebraElement)> {
        if self.shape != a.direct_sum(b) {
            return Err(CstarError::ShapeMismatch("split"));
        }
        let (first, second) = self.blocks.split_at(a.num_blocks());
        Ok((
            AlgebraElement {
                shape: a.clone(),
                blocks: first.to_vec(),
            },
            AlgebraElement {
                shape: b.clone(),
                blocks: second.to_vec(),
            },
        ))
    }

    /// Reads the center coordinates of a central element: the scalar each
    /// block is a multiple of the identity by (taken as the normalized
    /// trace; exact for genuinely central elements).
    pub fn center_values(&self) -> Vec<C> {
        self.shape
            .blocks()
            .iter()
            .zip(&self.blocks)
            .map(|(&n, b)| b.trace() / C::new(n as f64, 0.0))
            .collect()
    }

    /// Flattens into the canonical coordinate vector: blocks in shape order,
    /// column-major within each block.
    pub fn vectorize(&self) -> DVector<C> {
        let mut data = Vec::with_capacity(self.shape.dim());
        for block in &self.blocks {
            data.extend(block.iter().copied());
        }
        DVector::from_vec(data)
    }

    /// Rebuilds an element from its coordinate vector.
    pub fn from_vector(shape: &AlgebraShape, v: &DVector<C>) -> CstarResult<Self> {
        if v.len() != shape.dim() {
            return Err(CstarError::ShapeMismatch("element vector"));
        }
        let mut blocks = Vec::with_capacity(shape.num_blocks());
        let mut offset = 0;
        for &n in shape.blocks() {
            let block = DMatrix::from_iterator(n, n, v.iter().skip(offset).take(n * n).copied());
            blocks.push(block);
            offset += n * n;
        }
        Ok(AlgebraElement {
            shape: shape.clone(),
            blocks,
        })
    }

    /// Largest entrywise distance to another element (used in tests).
    pub fn max_abs_diff(&self, other: &AlgebraElement) -> f64 {
        assert_eq!(self.shape, other.shape, "comparing different shapes");
        self.blocks
            .iter()
            .zip(&other.blocks)
            .flat_map(|(a, b)| (a - b).iter().map(|c| c.norm()).collect::<Vec<_>>())
            .fold(0.0, f64::max)
    }

    /// True within tolerance `TOL_POS` of being an effect; returns the
    /// spectral range for error reporting.
    pub(crate) fn spectral_range(&self) -> CstarResult<(f64, f64)> {
        let eigs = self.hermitian_eigenvalues()?;
        let min = eigs
            .iter()
            .flatten()
            .copied()
            .fold(f64::INFINITY, f64::min);
        let max = eigs
            .iter()
            .flatten()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        Ok((min, max))
    }
}

/// JSON form: shape plus row-major nested arrays of `[re, im]` entries.
#[derive(Serialize, Deserialize)]
struct RawElement {
    shape: AlgebraShape,
    blocks: Vec<Vec<Vec<[f64; 2]>>>,
}

pub(crate) fn matrix_to_rows(m: &DMatrix<C>) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

pub(crate) fn matrix_from_rows(rows: &[Vec<[f64; 2]>]) -> Result<DMatrix<C>, String> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err("ragged matrix rows".to_owned());
    }
    Ok(DMatrix::from_fn(nrows, ncols, |r, c| {
        C::new(rows[r][c][0], rows[r][c][1])
    }))
}

impl Serialize for AlgebraElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RawElement {
            shape: self.shape.clone(),
            blocks: self.blocks.iter().map(matrix_to_rows).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for AlgebraElement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = RawElement::deserialize(deserializer)?;
        let blocks = raw
            .blocks
            .iter()
            .map(|rows| matrix_from_rows(rows))
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        AlgebraElement::from_blocks(raw.shape, blocks).map_err(D::Error::custom)
    }
}
