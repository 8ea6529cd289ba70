//! Positive unital maps between block-matrix algebras, and the structural
//! maps the conditioning pipeline is assembled from.
//!
//! A [`PUMap`] is stored as its matrix in the canonical element basis (see
//! [`super::VEC_CONVENTION`]), so composition is matrix multiplication and
//! application is a matrix–vector product.  Unitality is checked on
//! construction; positivity of maps built from raw data is checked
//! statistically by [`PUMap::validate`], since deciding positivity of a
//! linear map exactly is not a finite spectral computation.
//!
//! The structural maps mirror the discrete engine exactly, with the arrows
//! reversed (maps here transform *observables*, flowing backwards along the
//! probabilistic process):
//!
//! * [`coprojection_first`]/[`coprojection_second`] embed the factors of a
//!   tensor, playing the role the projections of a product play classically;
//! * [`center_embedding`], [`center_compression`], and
//!   [`center_multiplication`] manage the center `Z(A)` — the commutative
//!   part of an algebra where classical information lives;
//! * [`graph`] pairs a process `f : B → Z(A)` with the identity on `A`,
//!   the operator analogue of a graph map;
//! * [`char_map`] splits on an effect by square-root sandwiching, the
//!   operator analogue of a predicate's characteristic map.

use super::effect::Effect;
use super::element::AlgebraElement;
use super::shape::AlgebraShape;
use super::{C, TOL_UNITAL};
use crate::error::{CstarError, CstarResult};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// A positive unital linear map between algebras, stored as its matrix on
/// vectorized elements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPUMap", into = "RawPUMap")]
pub struct PUMap {
    source: AlgebraShape,
    target: AlgebraShape,
    matrix: DMatrix<C>,
}

/// JSON form: shapes plus the row-major `[re, im]` matrix and the
/// vectorization convention it is written in.
#[derive(Clone, Serialize, Deserialize)]
struct RawPUMap {
    source: AlgebraShape,
    target: AlgebraShape,
    matrix: Vec<Vec<[f64; 2]>>,
    #[serde(default = "default_convention")]
    convention: String,
}

fn default_convention() -> String {
    super::VEC_CONVENTION.to_owned()
}

impl TryFrom<RawPUMap> for PUMap {
    type Error = String;

    fn try_from(raw: RawPUMap) -> Result<Self, String> {
        if raw.convention != super::VEC_CONVENTION {
            return Err(format!(
                "unsupported vectorization convention `{}` (this build speaks `{}`)",
                raw.convention,
                super::VEC_CONVENTION
            ));
        }
        let matrix = super::element::matrix_from_rows(&raw.matrix)?;
        PUMap::new(raw.source, raw.target, matrix).map_err(|e| e.to_string())
    }
}

impl From<PUMap> for RawPUMap {
    fn from(map: PUMap) -> Self {
        RawPUMap {
            source: map.source,
            target: map.target,
            matrix: super::element::matrix_to_rows(&map.matrix),
            convention: default_convention(),
        }
    }
}

impl PUMap {
    /// Wraps a matrix as a map, checking dimensions and unitality.
    ///
    /// Positivity is *not* decided here; call [`PUMap::validate`] to probe it
    /// on random positive elements when the matrix comes from untrusted data.
    pub fn new(
        source: AlgebraShape,
        target: AlgebraShape,
        matrix: DMatrix<C>,
    ) -> CstarResult<Self> {
        if matrix.nrows() != target.dim() || matrix.ncols() != source.dim() {
            return Err(CstarError::ShapeMismatch("map matrix"));
        }
        let map = PUMap {
            source,
            target,
            matrix,
        };
        let defect = map.unital_defect();
        if defect > TOL_UNITAL {
            return Err(CstarError::NotUnital { defect });
        }
        Ok(map)
    }

    /// Builds a map from the images of the canonical basis elements, in
    /// order.
    pub(crate) fn from_basis_images(
        source: &AlgebraShape,
        target: &AlgebraShape,
        mut image: impl FnMut(usize) -> AlgebraElement,
    ) -> CstarResult<Self> {
        let mut matrix = DMatrix::zeros(target.dim(), source.dim());
        for k in 0..source.dim() {
            let img = image(k);
            if img.shape() != target {
                return Err(CstarError::ShapeMismatch("basis image"));
            }
            matrix.set_column(k, &img.vectorize());
        }
        Self::new(source.clone(), target.clone(), matrix)
    }

    /// Builds a map by applying a complex-linear closure to every basis
    /// element.  The closure is trusted to be linear; only unitality is
    /// checked.
    pub fn from_fn(
        source: &AlgebraShape,
        target: &AlgebraShape,
        mut f: impl FnMut(&AlgebraElement) -> AlgebraElement,
    ) -> CstarResult<Self> {
        Self::from_basis_images(source, target, |k| {
            f(&AlgebraElement::basis_element(source, k))
        })
    }

    /// The identity map.
    pub fn identity(shape: &AlgebraShape) -> Self {
        PUMap {
            source: shape.clone(),
            target: shape.clone(),
            matrix: DMatrix::identity(shape.dim(), shape.dim()),
        }
    }

    /// The source shape.
    pub fn source(&self) -> &AlgebraShape {
        &self.source
    }

    /// The target shape.
    pub fn target(&self) -> &AlgebraShape {
        &self.target
    }

    /// The matrix on vectorized elements.
    pub fn matrix(&self) -> &DMatrix<C> {
        &self.matrix
    }

    /// Applies the map to an element of the source algebra.
    pub fn apply(&self, a: &AlgebraElement) -> CstarResult<AlgebraElement> {
        if a.shape() != &self.source {
            return Err(CstarError::ShapeMismatch("apply"));
        }
        AlgebraElement::from_vector(&self.target, &(&self.matrix * a.vectorize()))
    }

    /// Composition `g ∘ f` (apply `f` first).
    pub fn compose(g: &PUMap, f: &PUMap) -> CstarResult<PUMap> {
        if f.target != g.source {
            return Err(CstarError::ShapeMismatch("compose"));
        }
        Ok(PUMap {
            source: f.source.clone(),
            target: g.target.clone(),
            matrix: &g.matrix * &f.matrix,
        })
    }

    /// Distance from unitality: `‖f(1) − 1‖` entrywise-max.
    pub fn unital_defect(&self) -> f64 {
        let image = AlgebraElement::from_vector(
            &self.target,
            &(&self.matrix * AlgebraElement::unit(&self.source).vectorize()),
        )
        .expect("matrix dimensions were checked");
        image.max_abs_diff(&AlgebraElement::unit(&self.target))
    }

    /// Statistically probes the map for positivity, contractivity, and
    /// adjoint-preservation on `probes` seeded random elements.
    ///
    /// Any genuinely positive unital map passes: it sends squares to
    /// positive elements and cannot grow the operator norm of Hermitian
    /// elements.  A non-positive map fails with overwhelming probability
    /// once a probe witnesses a negative eigenvalue.
    pub fn validate(&self, probes: usize, seed: u64, tol: f64) -> ValidationReport {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst_probe_eigenvalue = f64::INFINITY;
        let mut worst_norm_growth = f64::NEG_INFINITY;
        let mut adjoint_defect: f64 = 0.0;
        for _ in 0..probes {
            let b = random_element_for_validation(&mut rng, &self.source);
            // Positivity probe: a normalized square must stay positive.
            let square = b.adjoint().mul(&b).expect("same shape");
            let norm = square.op_norm().max(1e-12);
            let probe = square.scale(C::new(1.0 / norm, 0.0));
            let image = self.apply(&probe).expect("validated shapes");
            let min = image.min_eigenvalue().unwrap_or(f64::NEG_INFINITY);
            worst_probe_eigenvalue = worst_probe_eigenvalue.min(min);
            // Contraction probe: Hermitian part, normalized.
            let h = b.add(&b.adjoint()).expect("same shape").scale(C::new(0.5, 0.0));
            let hnorm = h.op_norm().max(1e-12);
            let h = h.scale(C::new(1.0 / hnorm, 0.0));
            let growth = self.apply(&h).expect("validated shapes").op_norm() - 1.0;
            worst_norm_growth = worst_norm_growth.max(growth);
            // Adjoint probe.
            let lhs = self.apply(&b.adjoint()).expect("validated shapes");
            let rhs = self.apply(&b).expect("validated shapes").adjoint();
            adjoint_defect = adjoint_defect.max(lhs.max_abs_diff(&rhs));
        }
        let unital_defect = self.unital_defect();
        let passed = unital_defect <= tol
            && worst_probe_eigenvalue >= -tol
            && worst_norm_growth <= tol
            && adjoint_defect <= tol;
        ValidationReport {
            probes,
            unital_defect,
            worst_probe_eigenvalue,
            worst_norm_growth,
            adjoint_defect,
            passed,
        }
    }
}

/// Outcome of probing a map for the positive-unital contract.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReport {
    /// Number of random probes used.
    pub probes: usize,
    /// `‖f(1) − 1‖`.
    pub unital_defect: f64,
    /// Most negative eigenvalue seen on images of normalized squares.
    pub worst_probe_eigenvalue: f64,
    /// Largest operator-norm growth seen on normalized Hermitian elements.
    pub worst_norm_growth: f64,
    /// Largest `‖f(a*) − f(a)*‖` seen.
    pub adjoint_defect: f64,
    /// True when every defect stayed inside the tolerance.
    pub passed: bool,
}

fn random_element_for_validation(rng: &mut ChaCha8Rng, shape: &AlgebraShape) -> AlgebraElement {
    let blocks = shape
        .blocks()
        .iter()
        .map(|&n| {
            DMatrix::from_fn(n, n, |_, _| {
                C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            })
        })
        .collect();
    AlgebraElement::from_blocks(shape.clone(), blocks).expect("blocks built to shape")
}

/// The first coprojection `κ₁ : A → A ⊗ B`, `a ↦ a ⊗ 1`.
pub fn coprojection_first(a: &AlgebraShape, b: &AlgebraShape) -> PUMap {
    let one_b = AlgebraElement::unit(b);
    PUMap::from_fn(a, &a.tensor(b), |x| x.tensor(&one_b))
        .expect("tensoring with the unit is positive and unital")
}

/// The second coprojection `κ₂ : B → A ⊗ B`, `b ↦ 1 ⊗ b`.
pub fn coprojection_second(a: &AlgebraShape, b: &AlgebraShape) -> PUMap {
    let one_a = AlgebraElement::unit(a);
    PUMap::from_fn(b, &a.tensor(b), |y| one_a.tensor(y))
        .expect("tensoring with the unit is positive and unital")
}

/// The inclusion `Z(A) → A` of the center: scalar tuples become central
/// block-scalar elements.
pub fn center_embedding(a: &AlgebraShape) -> PUMap {
    let center = a.center();
    PUMap::from_fn(&center, a, |z| {
        AlgebraElement::from_center_values(a, &z.center_values())
            .expect("center tuple matches block count")
    })
    .expect("the center embedding is positive and unital")
}

/// The conditional-expectation `A → Z(A)` taking each block to its
/// normalized trace.
pub fn center_compression(a: &AlgebraShape) -> PUMap {
    let center = a.center();
    PUMap::from_fn(a, &center, |x| {
        AlgebraElement::from_center_values(&center, &x.center_values())
            .expect("one scalar per block")
    })
    .expect("blockwise normalized trace is positive and unital")
}

/// The multiplication map `A ⊗ Z(A) → A` sending `a ⊗ z` to `a·ẑ` (with `ẑ`
/// the central embedding of `z`).  On basis elements: the matrix unit of
/// tensor block `(i, l)` survives exactly when `i = l`.
pub fn center_multiplication(a: &AlgebraShape) -> PUMap {
    let k = a.num_blocks();
    let source = a.tensor(&a.center());
    PUMap::from_basis_images(&source, a, |idx| {
        // Locate the basis index inside the tensor shape's blocks.
        let mut offset = 0;
        for (t, &n) in source.blocks().iter().enumerate() {
            if idx < offset + n * n {
                let local = idx - offset;
                let (col, row) = (local / n, local % n);
                let (block_a, block_z) = (t / k, t % k);
                if block_a == block_z {
                    // The matching matrix unit of A's block `block_a`.
                    let base = a.block_offset(block_a);
                    return AlgebraElement::basis_element(a, base + col * n + row);
                }
                return AlgebraElement::zeros(a);
            }
            offset += n * n;
        }
        unreachable!("basis index in range")
    })
    .expect("center multiplication is positive and unital")
}

/// The tensor of two maps on basis matrix units (used internally to build
/// graphs; positivity is only guaranteed when one side maps into a
/// commutative algebra).
pub(crate) fn tensor_map(lhs: &PUMap, rhs: &PUMap) -> CstarResult<PUMap> {
    let source = lhs.source().tensor(rhs.source());
    let target = lhs.target().tensor(rhs.target());
    let jb = rhs.source().num_blocks();
    let mut matrix = DMatrix::zeros(target.dim(), source.dim());
    let mut col = 0;
    for (t, _) in source.blocks().iter().enumerate() {
        let (i, j) = (t / jb, t % jb);
        let n_i = lhs.source().blocks()[i];
        let m_j = rhs.source().blocks()[j];
        let lhs_base = lhs.source().block_offset(i);
        let rhs_base = rhs.source().block_offset(j);
        // Column-major over the tensor block: columns (s1, s2), rows (r1, r2).
        for s1 in 0..n_i {
            for s2 in 0..m_j {
                for r1 in 0..n_i {
                    for r2 in 0..m_j {
                        let lhs_img = AlgebraElement::from_vector(
                            lhs.target(),
                            &lhs.matrix().column(lhs_base + s1 * n_i + r1).into_owned(),
                        )?;
                        let rhs_img = AlgebraElement::from_vector(
                            rhs.target(),
                            &rhs.matrix().column(rhs_base + s2 * m_j + r2).into_owned(),
                        )?;
                        matrix.set_column(col, &lhs_img.tensor(&rhs_img).vectorize());
                        col += 1;
                    }
                }
            }
        }
    }
    PUMap::new(source, target, matrix)
}

/// The graph `gr(f) : A ⊗ B → A` of a center-valued map `f : B → Z(A)`:
/// multiply the `A`-factor by the central image of the `B`-factor.
/// Satisfies `gr(f) ∘ κ₁ = id` and `gr(f) ∘ κ₂ = embed ∘ f`.
pub fn graph(a: &AlgebraShape, f: &PUMap) -> CstarResult<PUMap> {
    if *f.target() != a.center() {
        return Err(CstarError::ShapeMismatch("graph expects a center-valued map"));
    }
    let id_tensor_f = tensor_map(&PUMap::identity(a), f)?;
    PUMap::compose(&center_multiplication(a), &id_tensor_f)
}

/// Recovers the center-valued map from a graph-like `g : A ⊗ B → A`:
/// `b ↦ compress(g(1 ⊗ b))`.  Inverse to [`graph`] on actual graphs.
pub fn ungraph(a: &AlgebraShape, b: &AlgebraShape, g: &PUMap) -> CstarResult<PUMap> {
    if *g.source() != a.tensor(b) || g.target() != a {
        return Err(CstarError::ShapeMismatch("ungraph"));
    }
    let embed_b = coprojection_second(a, b);
    PUMap::compose(&center_compression(a), &PUMap::compose(g, &embed_b)?)
}

/// The characteristic map `A ⊕ A → A` of an effect: sandwich the first
/// copy with `√e` and the second with `√(1−e)`, then add.  Precomposing
/// with the sharp first-copy effect recovers `e`; splitting an observable
/// into both copies weighs "yes" against "no".
pub fn char_map(e: &Effect) -> PUMap {
    let shape = e.shape().clone();
    let dim = shape.dim();
    let s = e.sqrt();
    let s_perp = e.complement().sqrt();
    let source = shape.direct_sum(&shape);
    PUMap::from_basis_images(&source, &shape, |idx| {
        if idx < dim {
            let basis = AlgebraElement::basis_element(&shape, idx);
            s.mul(&basis).unwrap().mul(&s).unwrap()
        } else {
            let basis = AlgebraElement::basis_element(&shape, idx - dim);
            s_perp.mul(&basis).unwrap().mul(&s_perp).unwrap()
        }
    })
    .expect("sandwich sums are positive and unital")
}

/// The direct sum of two maps, acting blockwise on `A₁ ⊕ A₂ → B₁ ⊕ B₂`.
pub fn direct_sum_map(f: &PUMap, g: &PUMap) -> PUMap {
    let source = f.source().direct_sum(g.source());
    let target = f.target().direct_sum(g.target());
    let dim_f = f.source().dim();
    let zero_f = AlgebraElement::zeros(f.target());
    let zero_g = AlgebraElement::zeros(g.target());
    PUMap::from_basis_images(&source, &target, |idx| {
        if idx < dim_f {
            let img = AlgebraElement::from_vector(
                f.target(),
                &f.matrix().column(idx).into_owned(),
            )
            .expect("column length matches target");
            img.direct_sum(&zero_g)
        } else {
            let img = AlgebraElement::from_vector(
                g.target(),
                &g.matrix().column(idx - dim_f).into_owned(),
            )
            .expect("column length matches target");
            zero_f.direct_sum(&img)
        }
    })
    .expect("blockwise sums of unital maps are unital")
}
