//! Exact rational dense linear algebra.
//!
//! Everything here is exact: Gaussian elimination over the rationals,
//! characteristic polynomials by the Faddeev–LeVerrier recurrence, a
//! positive-semidefiniteness test reading the sign pattern of the
//! characteristic polynomial, and the rational `U^T D U` decomposition that
//! rewrites a PSD Gram matrix as an explicit weighted sum of squares.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::rational::Rational;

/// Dense rational matrix, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: alloc::vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        RatMatrix::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| crate::rational::rat_int(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                if self.get(i, j) != self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn add(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn neg(&self) -> RatMatrix {
        self.scale(&-Rational::one())
    }

    pub fn matmul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = RatMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other.get(k, j);
                    if !add.is_zero() {
                        let cur = out.get(i, j) + &add;
                        out.set(i, j, cur);
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Rational {
        assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i).clone()).sum()
    }

    /// Copy of the square block starting at `(offset, offset)`.
    pub fn principal_block(&self, offset: usize, size: usize) -> RatMatrix {
        let mut out = RatMatrix::zeros(size, size);
        for i in 0..size {
            for j in 0..size {
                out.set(i, j, self.get(offset + i, offset + j).clone());
            }
        }
        out
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LinalgError {
    NotSquare { rows: usize, cols: usize },
    NotSymmetric,
    DimensionMismatch(String),
    NotPsd { failing_index: usize },
}

impl fmt::Display for LinalgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinalgError::NotSquare { rows, cols } => write!(f, "matrix is {rows}x{cols}, not square"),
            LinalgError::NotSymmetric => write!(f, "matrix is not symmetric"),
            LinalgError::DimensionMismatch(s) => write!(f, "dimension mismatch: {s}"),
            LinalgError::NotPsd { failing_index } => write!(
                f,
                "matrix is not positive semidefinite (sign condition fails at coefficient {failing_index})"
            ),
        }
    }
}

impl core::error::Error for LinalgError {}

/// Affine solution set of a linear system: `particular + span(basis)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineSolution {
    pub particular: Vec<Rational>,
    pub basis: Vec<Vec<Rational>>,
}

/// The system `0 = c` with `c != 0` appeared during elimination; no solution
/// of this shape exists.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Inconsistent;

impl fmt::Display for Inconsistent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "linear system is inconsistent")
    }
}

impl core::error::Error for Inconsistent {}

/// Solve `A x = b` exactly, returning the full affine solution set.
///
/// Elimination is deterministic: columns are processed left to right and the
/// pivot is the first row (in input order) with a nonzero entry, so repeated
/// runs produce the identical particular point and basis. Free variables take
/// value 0 in the particular solution; each basis vector sets one free
/// variable to 1.
pub fn gauss_solve_affine(
    coeffs: &[Vec<Rational>],
    rhs: &[Rational],
) -> Result<AffineSolution, Inconsistent> {
    let nrows = coeffs.len();
    assert_eq!(nrows, rhs.len());
    let ncols = coeffs.first().map(|r| r.len()).unwrap_or(0);
    assert!(coeffs.iter().all(|r| r.len() == ncols), "ragged rows");

    let mut a: Vec<Vec<Rational>> = coeffs.to_vec();
    let mut b: Vec<Rational> = rhs.to_vec();

    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut rank = 0usize;
    for col in 0..ncols {
        let Some(p) = (rank..nrows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        b.swap(rank, p);
        let inv = a[rank][col].clone();
        for x in a[rank].iter_mut() {
            *x /= &inv;
        }
        b[rank] /= &inv;
        for r in 0..nrows {
            if r != rank && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in 0..ncols {
                    let sub = &a[rank][c] * &factor;
                    a[r][c] -= sub;
                }
                let sub = &b[rank] * &factor;
                b[r] -= sub;
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    for r in rank..nrows {
        if !b[r].is_zero() {
            return Err(Inconsistent);
        }
    }

    let mut particular = alloc::vec![Rational::zero(); ncols];
    for (r, &pc) in pivot_cols.iter().enumerate() {
        particular[pc] = b[r].clone();
    }
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = alloc::vec![Rational::zero(); ncols];
        v[free] = Rational::one();
        for (r, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -a[r][free].clone();
        }
        basis.push(v);
    }
    Ok(AffineSolution { particular, basis })
}

/// Coefficients `p_0..p_n` of `det(M - X*Id)`, so the leading coefficient is
/// `(-1)^n`. Computed by Faddeev–LeVerrier: exact, O(n^4), and the integer
/// divisions by `k` stay exact over the rationals.
pub fn char_poly(m: &RatMatrix) -> Result<Vec<Rational>, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    if !m.is_symmetric() {
        return Err(LinalgError::NotSymmetric);
    }
    let n = m.rows;
    // det(X*Id - M) = X^n + c[1] X^(n-1) + ... + c[n]
    let mut c = alloc::vec![Rational::zero(); n + 1];
    c[0] = Rational::one();
    let mut mk = RatMatrix::zeros(n, n);
    for k in 1..=n {
        mk = m.matmul(&mk);
        let ck_prev = c[k - 1].clone();
        for i in 0..n {
            let v = mk.get(i, i) + &ck_prev;
            mk.set(i, i, v);
        }
        let t = m.matmul(&mk).trace();
        c[k] = -t / Rational::from_integer(k.into());
    }
    // p_i = coeff of X^i in det(M - X*Id) = (-1)^n * c[n - i]
    let sign = if n % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    };
    Ok((0..=n).map(|i| &sign * &c[n - i]).collect())
}

/// Outcome of the exact PSD test.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PsdVerdict {
    pub is_psd: bool,
    /// Dimension of the kernel; meaningful only when `is_psd`.
    pub kernel_dim: usize,
    /// First index where the sign condition fails, when not PSD.
    pub failing_index: Option<usize>,
}

impl PsdVerdict {
    pub fn is_positive_definite(&self) -> bool {
        self.is_psd && self.kernel_dim == 0
    }
}

/// Exact PSD test: a symmetric `M` is PSD iff `(-1)^i p_i >= 0` for all
/// `0 <= i < n`, where `p_i` are the characteristic polynomial coefficients.
/// For PSD input the sequence `(-1)^i p_i` is a run of zeroes followed by
/// positives, and the zero count is the kernel dimension.
pub fn is_psd_exact(m: &RatMatrix) -> Result<PsdVerdict, LinalgError> {
    let p = char_poly(m)?;
    let n = m.rows;
    let mut kernel_dim = 0usize;
    let mut counting_zeros = true;
    for i in 0..n {
        let s = if i % 2 == 0 {
            p[i].clone()
        } else {
            -p[i].clone()
        };
        if s.is_negative() {
            return Ok(PsdVerdict {
                is_psd: false,
                kernel_dim: 0,
                failing_index: Some(i),
            });
        }
        if counting_zeros {
            if s.is_zero() {
                kernel_dim += 1;
            } else {
                counting_zeros = false;
            }
        }
    }
    Ok(PsdVerdict {
        is_psd: true,
        kernel_dim,
        failing_index: None,
    })
}

/// `U^T D U` decomposition with `U` unit upper triangular and `D` diagonal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LdltResult {
    pub unit_upper: RatMatrix,
    pub diag: Vec<Rational>,
}

/// A zero pivot with a nonzero residual row. A PSD matrix can never produce
/// this (a zero diagonal entry of a PSD matrix forces its whole row to
/// vanish), so hitting it refutes positive semidefiniteness.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct NotDecomposable {
    pub pivot: usize,
}

impl fmt::Display for NotDecomposable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "zero pivot with nonzero row at index {} (matrix is not PSD)",
            self.pivot
        )
    }
}

impl core::error::Error for NotDecomposable {}

/// Decompose symmetric `Q` as `U^T D U` without pivoting. Succeeds on every
/// PSD matrix, with all diagonal entries nonnegative; fails with
/// [`NotDecomposable`] when a zero pivot has a nonzero row, which only
/// non-PSD matrices can produce.
pub fn ldlt(q: &RatMatrix) -> Result<Result<LdltResult, NotDecomposable>, LinalgError> {
    if !q.is_square() {
        return Err(LinalgError::NotSquare {
            rows: q.rows,
            cols: q.cols,
        });
    }
    if !q.is_symmetric() {
        return Err(LinalgError::NotSymmetric);
    }
    let n = q.rows;
    let mut a = q.clone();
    let mut u = RatMatrix::identity(n);
    let mut d = Vec::with_capacity(n);
    for k in 0..n {
        let pivot = a.get(k, k).clone();
        if pivot.is_zero() {
            if (k + 1..n).any(|j| !a.get(k, j).is_zero()) {
                return Ok(Err(NotDecomposable { pivot: k }));
            }
            d.push(Rational::zero());
            continue;
        }
        d.push(pivot.clone());
        for j in k + 1..n {
            u.set(k, j, a.get(k, j) / &pivot);
        }
        for i in k + 1..n {
            for j in i..n {
                let delta = &(a.get(k, i) * a.get(k, j)) / &pivot;
                let v = a.get(i, j) - &delta;
                a.set(i, j, v.clone());
                a.set(j, i, v);
            }
        }
    }
    Ok(Ok(LdltResult {
        unit_upper: u,
        diag: d,
    }))
}

/// Rewrite the quadratic form `monomials^T Q monomials` of a PSD Gram matrix
/// as an explicit weighted sum of squares `sum_i d_i * l_i^2`. The `l_i` are
/// the rows of the `U` factor read as linear combinations of the monomials;
/// zero-weight terms are dropped.
pub fn gram_to_sos(
    q: &RatMatrix,
    monomials: &[Monomial],
) -> Result<Vec<(Rational, Polynomial)>, LinalgError> {
    if q.rows != monomials.len() {
        return Err(LinalgError::DimensionMismatch(alloc::format!(
            "Gram matrix is {}x{} but {} monomials given",
            q.rows,
            q.cols,
            monomials.len()
        )));
    }
    let verdict = is_psd_exact(q)?;
    if !verdict.is_psd {
        return Err(LinalgError::NotPsd {
            failing_index: verdict.failing_index.unwrap_or(0),
        });
    }
    let ldlt_result = ldlt(q)?.expect("PSD matrix always decomposes");
    let n = q.rows;
    let mut out = Vec::new();
    for i in 0..n {
        if ldlt_result.diag[i].is_zero() {
            continue;
        }
        let mut l = Polynomial::zero();
        for j in 0..n {
            let c = ldlt_result.unit_upper.get(i, j);
            if !c.is_zero() {
                l = &l + &Polynomial::from_term(monomials[j].clone(), c.clone());
            }
        }
        out.push((ldlt_result.diag[i].clone(), l));
    }
    Ok(out)
}

/// Exact determinant by Gaussian elimination with row pivoting.
pub fn determinant(m: &RatMatrix) -> Result<Rational, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    let mut a = m.clone();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a.get(r, col).is_zero()) else {
            return Ok(Rational::zero());
        };
        if p != col {
            for j in 0..n {
                let x = a.get(col, j).clone();
                let y = a.get(p, j).clone();
                a.set(col, j, y);
                a.set(p, j, x);
            }
            det = -det;
        }
        let pivot = a.get(col, col).clone();
        det *= &pivot;
        for r in col + 1..n {
            if a.get(r, col).is_zero() {
                continue;
            }
            let factor = a.get(r, col) / &pivot;
            for j in col..n {
                let sub = &factor * a.get(col, j);
                let v = a.get(r, j) - &sub;
                a.set(r, j, v);
            }
        }
    }
    Ok(det)
}

/// Adjugate (transpose of the cofactor matrix): `adj(A) * A = det(A) * Id`.
pub fn adjugate(m: &RatMatrix) -> Result<RatMatrix, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(RatMatrix::zeros(0, 0));
    }
    let mut out = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut minor = RatMatrix::zeros(n - 1, n - 1);
            for (ri, r) in (0..n).filter(|&r| r != i).enumerate() {
                for (ci, c) in (0..n).filter(|&c| c != j).enumerate() {
                    minor.set(ri, ci, m.get(r, c).clone());
                }
            }
            let mut cof = determinant(&minor)?;
            if (i + j) % 2 == 1 {
                cof = -cof;
            }
            // adjugate is the transposed cofactor matrix
            out.set(j, i, cof);
        }
    }
    Ok(out)
}
