//! Reduction of the witness search to semidefinite feasibility.
//!
//! Fixing a certificate shape (which subset products participate, which
//! monomial vector spans each Gram block, and a degree cap for each equality
//! multiplier), the witness equation
//!
//! ```text
//!   sum_R M_R^T Q_R M_R * R + sum_j lambda_j Z_j + 1 = 0
//! ```
//!
//! is linear in the unknown Gram entries and multiplier coefficients. Exact
//! Gaussian elimination turns its solution set into an affine matrix pencil
//! `Q(alpha) = -F0 + sum_i alpha_i F_i` over the block-diagonal Gram matrix,
//! together with an affine map from `alpha` to the multiplier coefficients.
//! Any parameter point satisfies the witness equation by construction; the
//! remaining (hard) condition is positive semidefiniteness of `Q(alpha)`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::linalg::{gauss_solve_affine, AffineSolution, RatMatrix};
use crate::monomial::{monomials_up_to_degree, Monomial};
use crate::poly::{mask_degree, mask_product, Polynomial, ProductSetTooLarge, SubsetMask};
use crate::problem::Problem;
use crate::rational::Rational;

/// One Gram block of a certificate shape: the subset product it multiplies
/// and the monomial vector spanning it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ShapeBlock {
    pub mask: SubsetMask,
    pub monomials: Vec<Monomial>,
}

/// A certificate search shape. `multiplier_degrees[j]` caps the total degree
/// of the equality multiplier `lambda_j`; `None` pins `lambda_j = 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WitnessShape {
    pub blocks: Vec<ShapeBlock>,
    pub multiplier_degrees: Vec<Option<u32>>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ShapeError {
    DegreeCapOdd(u32),
    ProductSetTooLarge(ProductSetTooLarge),
    MaskOutOfRange {
        mask: SubsetMask,
        inequalities: usize,
    },
    EmptyMonomialVector {
        block: usize,
    },
    DuplicateMonomial {
        block: usize,
    },
    MultiplierCountMismatch {
        got: usize,
        equalities: usize,
    },
}

impl fmt::Display for ShapeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeError::DegreeCapOdd(d) => write!(f, "degree cap must be even, got {d}"),
            ShapeError::ProductSetTooLarge(e) => {
                write!(
                    f,
                    "{e}; pass a larger --product-cap or choose the shape manually"
                )
            }
            ShapeError::MaskOutOfRange { mask, inequalities } => write!(
                f,
                "block mask {mask:#b} selects inequalities beyond the {inequalities} present"
            ),
            ShapeError::EmptyMonomialVector { block } => {
                write!(f, "block {block} has an empty monomial vector")
            }
            ShapeError::DuplicateMonomial { block } => {
                write!(f, "block {block} repeats a monomial")
            }
            ShapeError::MultiplierCountMismatch { got, equalities } => write!(
                f,
                "shape provides {got} multiplier degree caps for {equalities} equalities"
            ),
        }
    }
}

impl core::error::Error for ShapeError {}

impl WitnessShape {
    pub fn validate(&self, prob: &Problem) -> Result<(), ShapeError> {
        let n = prob.inequalities().len();
        let limit: SubsetMask = if n >= 64 {
            SubsetMask::MAX
        } else {
            (1 << n) - 1
        };
        for (b, block) in self.blocks.iter().enumerate() {
            if block.mask & !limit != 0 {
                return Err(ShapeError::MaskOutOfRange {
                    mask: block.mask,
                    inequalities: n,
                });
            }
            if block.monomials.is_empty() {
                return Err(ShapeError::EmptyMonomialVector { block: b });
            }
            for (i, m) in block.monomials.iter().enumerate() {
                if block.monomials[..i].contains(m) {
                    return Err(ShapeError::DuplicateMonomial { block: b });
                }
            }
        }
        if self.multiplier_degrees.len() != prob.equalities().len() {
            return Err(ShapeError::MultiplierCountMismatch {
                got: self.multiplier_degrees.len(),
                equalities: prob.equalities().len(),
            });
        }
        Ok(())
    }
}

/// Default shape under an even total-degree cap: every subset product `R`
/// with `deg R <= cap` gets a block spanned by all monomials `m` with
/// `2*deg m + deg R <= cap` (ascending graded-lex), and each equality
/// multiplier is capped at `cap - deg Z_j`. Completeness would require
/// unboundedly large shapes, so a failed search at one cap only rules out
/// certificates of that shape.
pub fn default_shape(
    prob: &Problem,
    degree_cap: u32,
    product_cap: usize,
) -> Result<WitnessShape, ShapeError> {
    if degree_cap % 2 != 0 {
        return Err(ShapeError::DegreeCapOdd(degree_cap));
    }
    let n = prob.inequalities().len();
    if n >= usize::BITS as usize || (1usize << n) > product_cap {
        return Err(ShapeError::ProductSetTooLarge(ProductSetTooLarge {
            polys: n,
            cap: product_cap,
        }));
    }
    let mut blocks = Vec::new();
    for mask in 0..(1u64 << n) {
        let deg_r = mask_degree(prob.inequalities(), mask);
        if deg_r > degree_cap {
            continue;
        }
        let half = (degree_cap - deg_r) / 2;
        let monomials = monomials_up_to_degree(prob.num_vars(), half);
        blocks.push(ShapeBlock { mask, monomials });
    }
    let multiplier_degrees = prob
        .equalities()
        .iter()
        .map(|z| degree_cap.checked_sub(z.degree()))
        .collect();
    Ok(WitnessShape {
        blocks,
        multiplier_degrees,
    })
}

/// Position of one Gram block inside the assembled block-diagonal matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PencilBlock {
    pub mask: SubsetMask,
    pub monomials: Vec<Monomial>,
    pub offset: usize,
    pub size: usize,
}

/// Affine dependence of one equality multiplier on the pencil parameters:
/// `lambda_j(alpha) = sum_k (particular[k] + sum_i alpha_i basis[i][k]) * monomials[k]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiplierMap {
    pub monomials: Vec<Monomial>,
    pub particular: Vec<Rational>,
    /// One coefficient row per pencil parameter.
    pub basis: Vec<Vec<Rational>>,
}

impl MultiplierMap {
    pub fn polynomial_at(&self, alpha: &[Rational]) -> Polynomial {
        let mut p = Polynomial::zero();
        for (k, m) in self.monomials.iter().enumerate() {
            let mut c = self.particular[k].clone();
            for (i, a) in alpha.iter().enumerate() {
                c += a * &self.basis[i][k];
            }
            if !c.is_zero() {
                p = &p + &Polynomial::from_term(m.clone(), c);
            }
        }
        p
    }
}

/// Affine pencil of symmetric block-diagonal matrices
/// `Q(alpha) = -f0 + sum_i alpha_i * basis[i]`, with provenance back to the
/// Gram blocks and the multiplier embedding. Every parameter point satisfies
/// the witness equation of the problem it was assembled from; `Q(alpha)` PSD
/// makes the point a certificate.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Pencil {
    pub f0: RatMatrix,
    pub basis: Vec<RatMatrix>,
    pub blocks: Vec<PencilBlock>,
    pub multipliers: Vec<MultiplierMap>,
    pub param_names: Vec<String>,
}

impl Pencil {
    pub fn dim(&self) -> usize {
        self.f0.rows()
    }

    pub fn param_count(&self) -> usize {
        self.basis.len()
    }

    /// `Q(alpha) = -f0 + sum alpha_i basis[i]`, exactly.
    pub fn matrix_at(&self, alpha: &[Rational]) -> RatMatrix {
        assert_eq!(alpha.len(), self.param_count(), "parameter count mismatch");
        let mut q = self.f0.neg();
        for (a, f) in alpha.iter().zip(&self.basis) {
            if !a.is_zero() {
                q = q.add(&f.scale(a));
            }
        }
        q
    }

    /// Does `q` lie in the pencil's affine variety? Returns a witness
    /// parameter point if so. Block structure must match exactly.
    pub fn membership(&self, q: &RatMatrix) -> Option<Vec<Rational>> {
        if q.rows() != self.dim() || q.cols() != self.dim() {
            return None;
        }
        let n = self.dim();
        let m = self.param_count();
        let mut coeffs = Vec::new();
        let mut rhs = Vec::new();
        for i in 0..n {
            for j in i..n {
                coeffs.push((0..m).map(|k| self.basis[k].get(i, j).clone()).collect());
                rhs.push(q.get(i, j) + self.f0.get(i, j));
            }
        }
        let sol = gauss_solve_affine(&coeffs, &rhs).ok()?;
        Some(sol.particular)
    }
}

fn alpha_names(m: usize) -> Vec<String> {
    (0..m).map(|i| format!("a{}", i + 1)).collect()
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AssembleError {
    Shape(ShapeError),
    /// The linear identity constraints admit no solution: no certificate of
    /// this shape exists. This is a sound negative for the given shape only;
    /// larger shapes may still contain witnesses.
    NoCertificateOfShape,
}

impl fmt::Display for AssembleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AssembleError::Shape(e) => write!(f, "{e}"),
            AssembleError::NoCertificateOfShape => write!(
                f,
                "no certificate of this shape: the identity constraints are inconsistent \
                 (a larger degree cap or different shape may still succeed)"
            ),
        }
    }
}

impl core::error::Error for AssembleError {}

impl From<ShapeError> for AssembleError {
    fn from(e: ShapeError) -> Self {
        AssembleError::Shape(e)
    }
}

/// Index layout of the unknown vector: upper-triangle Gram entries, row-major
/// within each block, blocks in shape order; then multiplier coefficients,
/// grouped per equality, monomials ascending.
struct UnknownLayout {
    block_starts: Vec<usize>,
    block_sizes: Vec<usize>,
    multiplier_starts: Vec<usize>,
    multiplier_monomials: Vec<Vec<Monomial>>,
    total: usize,
}

fn layout(shape: &WitnessShape, prob: &Problem) -> UnknownLayout {
    let mut block_starts = Vec::new();
    let mut block_sizes = Vec::new();
    let mut total = 0usize;
    for block in &shape.blocks {
        let k = block.monomials.len();
        block_starts.push(total);
        block_sizes.push(k);
        total += k * (k + 1) / 2;
    }
    let mut multiplier_starts = Vec::new();
    let mut multiplier_monomials = Vec::new();
    for cap in &shape.multiplier_degrees {
        multiplier_starts.push(total);
        let monos = match cap {
            Some(d) => monomials_up_to_degree(prob.num_vars(), *d),
            None => Vec::new(),
        };
        total += monos.len();
        multiplier_monomials.push(monos);
    }
    UnknownLayout {
        block_starts,
        block_sizes,
        multiplier_starts,
        multiplier_monomials,
        total,
    }
}

fn triangle_index(i: usize, j: usize, k: usize) -> usize {
    // upper triangle, row-major: (i, j) with i <= j in a k x k block
    debug_assert!(i <= j && j < k);
    i * k - i * (i + 1) / 2 + j
}

/// Assemble the pencil for `prob` under `shape`.
///
/// Builds the linear identity constraints (one per monomial of the expanded
/// witness equation), solves them exactly, and reads the affine solution set
/// back as a block matrix pencil. The parameter basis is whatever the
/// deterministic elimination produces; it spans the same affine variety as
/// any other valid basis.
pub fn assemble(prob: &Problem, shape: &WitnessShape) -> Result<Pencil, AssembleError> {
    shape.validate(prob)?;
    let lay = layout(shape, prob);

    // column polynomial of every unknown: its coefficient in the expanded
    // witness equation as a polynomial in the problem variables
    let mut columns: Vec<Polynomial> = Vec::with_capacity(lay.total);
    for block in &shape.blocks {
        let r = mask_product(prob.inequalities(), block.mask);
        let k = block.monomials.len();
        for i in 0..k {
            for j in i..k {
                let mm = block.monomials[i].mul(&block.monomials[j]);
                let mut col = r.mul_monomial(&mm);
                if i != j {
                    col = col.scale(&crate::rational::rat_int(2));
                }
                columns.push(col);
            }
        }
    }
    for (j, monos) in lay.multiplier_monomials.iter().enumerate() {
        let z = &prob.equalities()[j];
        for m in monos {
            columns.push(z.mul_monomial(m));
        }
    }

    // constraint rows: for every monomial occurring anywhere, the total
    // coefficient must cancel the +1 constant
    let mut row_monomials: Vec<Monomial> = Vec::new();
    for col in &columns {
        for (m, _) in col.iter_terms() {
            if let Err(pos) = row_monomials.binary_search(m) {
                row_monomials.insert(pos, m.clone());
            }
        }
    }
    if let Err(pos) = row_monomials.binary_search(&Monomial::one()) {
        row_monomials.insert(pos, Monomial::one());
    }

    let coeffs: Vec<Vec<Rational>> = row_monomials
        .iter()
        .map(|m| columns.iter().map(|col| col.coefficient(m)).collect())
        .collect();
    let rhs: Vec<Rational> = row_monomials
        .iter()
        .map(|m| {
            if m.is_one() {
                -Rational::from_integer(1.into())
            } else {
                Rational::zero()
            }
        })
        .collect();

    let AffineSolution { particular, basis } =
        gauss_solve_affine(&coeffs, &rhs).map_err(|_| AssembleError::NoCertificateOfShape)?;

    // read the Gram part of a solution vector back as a block-diagonal matrix
    let dim: usize = lay.block_sizes.iter().sum();
    let mut offsets = Vec::new();
    {
        let mut off = 0usize;
        for &k in &lay.block_sizes {
            offsets.push(off);
            off += k;
        }
    }
    let gram_matrix = |vec: &[Rational]| -> RatMatrix {
        let mut q = RatMatrix::zeros(dim, dim);
        for (b, &k) in lay.block_sizes.iter().enumerate() {
            let start = lay.block_starts[b];
            let off = offsets[b];
            for i in 0..k {
                for j in i..k {
                    let v = vec[start + triangle_index(i, j, k)].clone();
                    q.set(off + i, off + j, v.clone());
                    q.set(off + j, off + i, v);
                }
            }
        }
        q
    };

    let m = basis.len();
    let f0 = gram_matrix(&particular).neg();
    let basis_mats: Vec<RatMatrix> = basis.iter().map(|v| gram_matrix(v)).collect();

    let blocks = shape
        .blocks
        .iter()
        .enumerate()
        .map(|(b, sb)| PencilBlock {
            mask: sb.mask,
            monomials: sb.monomials.clone(),
            offset: offsets[b],
            size: lay.block_sizes[b],
        })
        .collect();

    let multipliers = lay
        .multiplier_monomials
        .iter()
        .enumerate()
        .map(|(j, monos)| {
            let start = lay.multiplier_starts[j];
            MultiplierMap {
                monomials: monos.clone(),
                particular: particular[start..start + monos.len()].to_vec(),
                basis: basis
                    .iter()
                    .map(|v| v[start..start + monos.len()].to_vec())
                    .collect(),
            }
        })
        .collect();

    Ok(Pencil {
        f0,
        basis: basis_mats,
        blocks,
        multipliers,
        param_names: alpha_names(m),
    })
}

/// Exact certificate extracted from a pencil at a rational parameter point.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CertBlock {
    pub mask: SubsetMask,
    pub monomials: Vec<Monomial>,
    pub gram: RatMatrix,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Certificate {
    pub blocks: Vec<CertBlock>,
    pub multipliers: Vec<Polynomial>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ParamCountMismatch {
    pub expected: usize,
    pub got: usize,
}

impl fmt::Display for ParamCountMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pencil has {} parameters, point has {}",
            self.expected, self.got
        )
    }
}

impl core::error::Error for ParamCountMismatch {}

/// Read the certificate off the pencil at `alpha`. The witness equation holds
/// by construction; PSD-ness of the blocks is *not* checked here: that is
/// the verifier's job.
pub fn reconstruct_certificate(
    pencil: &Pencil,
    alpha: &[Rational],
) -> Result<Certificate, ParamCountMismatch> {
    if alpha.len() != pencil.param_count() {
        return Err(ParamCountMismatch {
            expected: pencil.param_count(),
            got: alpha.len(),
        });
    }
    let q = pencil.matrix_at(alpha);
    let blocks = pencil
        .blocks
        .iter()
        .map(|b| CertBlock {
            mask: b.mask,
            monomials: b.monomials.clone(),
            gram: q.principal_block(b.offset, b.size),
        })
        .collect();
    let multipliers = pencil
        .multipliers
        .iter()
        .map(|mm| mm.polynomial_at(alpha))
        .collect();
    Ok(Certificate {
        blocks,
        multipliers,
    })
}

/// An affine relation `sum_i coeffs[i] * alpha_i = constant` over a pencil's
/// parameters.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineRelation {
    pub coeffs: Vec<Rational>,
    pub constant: Rational,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SliceError {
    AllCoefficientsZero,
    CoeffCountMismatch { expected: usize, got: usize },
    ParamIndexOutOfRange { index: usize, params: usize },
}

impl fmt::Display for SliceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SliceError::AllCoefficientsZero => {
                write!(f, "slicing relation has no nonzero parameter coefficient")
            }
            SliceError::CoeffCountMismatch { expected, got } => {
                write!(
                    f,
                    "relation has {got} coefficients, pencil has {expected} parameters"
                )
            }
            SliceError::ParamIndexOutOfRange { index, params } => {
                write!(
                    f,
                    "parameter index {index} out of range for {params} parameters"
                )
            }
        }
    }
}

impl core::error::Error for SliceError {}

/// Restrict the pencil to the affine relation, eliminating one parameter.
///
/// The eliminated parameter is the one with the *last* nonzero coefficient;
/// solving the relation for it and substituting folds its basis matrix into
/// the others and into `f0`. Sliced-pencil points map injectively into
/// original-pencil points satisfying the relation.
pub fn slice(pencil: &Pencil, relation: &AffineRelation) -> Result<Pencil, SliceError> {
    let m = pencil.param_count();
    if relation.coeffs.len() != m {
        return Err(SliceError::CoeffCountMismatch {
            expected: m,
            got: relation.coeffs.len(),
        });
    }
    let Some(k) = (0..m).rev().find(|&i| !relation.coeffs[i].is_zero()) else {
        return Err(SliceError::AllCoefficientsZero);
    };
    let rk = relation.coeffs[k].clone();
    // alpha_k = (constant - sum_{i != k} coeffs_i alpha_i) / rk
    let c_over = &relation.constant / &rk;
    let f0 = pencil.f0.sub(&pencil.basis[k].scale(&c_over));
    let mut basis = Vec::with_capacity(m - 1);
    let mut param_names = Vec::with_capacity(m - 1);
    let mut multipliers: Vec<MultiplierMap> = pencil
        .multipliers
        .iter()
        .map(|mm| {
            let mut particular = mm.particular.clone();
            for (p, bk) in particular.iter_mut().zip(&mm.basis[k]) {
                *p += &c_over * bk;
            }
            MultiplierMap {
                monomials: mm.monomials.clone(),
                particular,
                basis: Vec::new(),
            }
        })
        .collect();
    for i in 0..m {
        if i == k {
            continue;
        }
        let ratio = &relation.coeffs[i] / &rk;
        basis.push(pencil.basis[i].sub(&pencil.basis[k].scale(&ratio)));
        param_names.push(pencil.param_names[i].clone());
        for (mm, orig) in multipliers.iter_mut().zip(&pencil.multipliers) {
            let row: Vec<Rational> = orig.basis[i]
                .iter()
                .zip(&orig.basis[k])
                .map(|(bi, bk)| bi - &(&ratio * bk))
                .collect();
            mm.basis.push(row);
        }
    }
    Ok(Pencil {
        f0,
        basis,
        blocks: pencil.blocks.clone(),
        multipliers,
        param_names,
    })
}

/// Map a sliced-pencil point back to the original parameter space.
pub fn unslice_point(
    relation: &AffineRelation,
    sliced_alpha: &[Rational],
) -> Result<Vec<Rational>, SliceError> {
    let m = relation.coeffs.len();
    if sliced_alpha.len() + 1 != m {
        return Err(SliceError::CoeffCountMismatch {
            expected: m,
            got: sliced_alpha.len() + 1,
        });
    }
    let Some(k) = (0..m).rev().find(|&i| !relation.coeffs[i].is_zero()) else {
        return Err(SliceError::AllCoefficientsZero);
    };
    let mut full = Vec::with_capacity(m);
    let mut it = sliced_alpha.iter();
    for i in 0..m {
        if i == k {
            full.push(Rational::zero()); // placeholder
        } else {
            full.push(it.next().unwrap().clone());
        }
    }
    let mut acc = relation.constant.clone();
    for (i, a) in full.iter().enumerate() {
        if i != k {
            acc -= &relation.coeffs[i] * a;
        }
    }
    full[k] = acc / &relation.coeffs[k];
    Ok(full)
}

impl AffineRelation {
    /// Relation text over the pencil's parameter names, e.g. `-9*a1+a2 = -10`.
    pub fn display<'a>(&'a self, names: &'a [String]) -> RelationDisplay<'a> {
        RelationDisplay { rel: self, names }
    }
}

pub struct RelationDisplay<'a> {
    rel: &'a AffineRelation,
    names: &'a [String],
}

impl fmt::Display for RelationDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, c) in self.rel.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let name = self
                .names
                .get(i)
                .cloned()
                .unwrap_or_else(|| format!("a{}", i + 1));
            if wrote {
                write!(f, " {} ", if c < &Rational::zero() { "-" } else { "+" })?;
            } else if c < &Rational::zero() {
                write!(f, "-")?;
            }
            let mag = if c < &Rational::zero() {
                -c.clone()
            } else {
                c.clone()
            };
            if mag == Rational::from_integer(1.into()) {
                write!(f, "{name}")?;
            } else {
                write!(f, "{mag}*{name}")?;
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        write!(f, " = {}", self.rel.constant)
    }
}

impl Certificate {
    /// The residual `sum_R M^T Q M * R + sum_j lambda_j Z_j + 1`, which a
    /// valid certificate makes identically zero.
    pub fn residual(&self, prob: &Problem) -> Polynomial {
        let mut total = Polynomial::one();
        for block in &self.blocks {
            let r = mask_product(prob.inequalities(), block.mask);
            let mut quad = Polynomial::zero();
            for i in 0..block.monomials.len() {
                for j in 0..block.monomials.len() {
                    let c = block.gram.get(i, j);
                    if !c.is_zero() {
                        let mm = block.monomials[i].mul(&block.monomials[j]);
                        quad = &quad + &Polynomial::from_term(mm, c.clone());
                    }
                }
            }
            total = &total + &(&quad * &r);
        }
        for (lambda, z) in self.multipliers.iter().zip(prob.equalities()) {
            total = &total + &(lambda * z);
        }
        total
    }
}
