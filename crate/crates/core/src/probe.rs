//! Exact degeneracy diagnostics for a pencil.
//!
//! The feasible set of `Q(alpha) = -F0 + sum alpha_i F_i >= 0` has empty
//! interior (while being nonempty) exactly when the affine variety is
//! tangent to the `det = 0` hypersurface: the map
//! `phi(alpha) = det(Q(alpha))` then has a critical point at the solution,
//! i.e. `phi = 0` and `grad phi = 0` simultaneously. Both are computed here
//! in exact rational arithmetic; the gradient goes through the adjugate
//! identity `d det / d alpha_i = tr(adj(Q) * F_i)`, which avoids symbolic
//! determinants at larger sizes. For small pencils the fully symbolic
//! determinant polynomial is also produced.

use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::linalg::{adjugate, determinant};
use crate::poly::Polynomial;
use crate::rational::Rational;
use crate::reduction::Pencil;

/// Exact report at one rational parameter point.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProbeReport {
    /// `det(Q(point))`, exactly.
    pub phi_value: Rational,
    /// `grad det` at the point, exactly.
    pub gradient: Vec<Rational>,
    /// True iff the determinant and its whole gradient vanish: the point is
    /// singular on the determinant variety, the signature of an SDP whose
    /// solution set has empty interior.
    pub singular: bool,
    /// `det(-F0 + sum a_i F_i)` as a polynomial in the parameters; present
    /// only within the size guard (m <= 4 parameters, dimension <= 8).
    pub symbolic_det: Option<Polynomial>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ProbeDimensionMismatch {
    pub expected: usize,
    pub got: usize,
}

impl fmt::Display for ProbeDimensionMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pencil has {} parameters, probe point has {}",
            self.expected, self.got
        )
    }
}

impl core::error::Error for ProbeDimensionMismatch {}

const SYMBOLIC_MAX_PARAMS: usize = 4;
const SYMBOLIC_MAX_DIM: usize = 8;

/// Evaluate `phi = det(Q(alpha))` and its gradient at `point`, exactly, and
/// report whether the point is singular. The symbolic determinant is
/// attached when the pencil is small enough for cofactor expansion over
/// polynomial entries.
pub fn degeneracy_probe(
    pencil: &Pencil,
    point: &[Rational],
) -> Result<ProbeReport, ProbeDimensionMismatch> {
    let m = pencil.param_count();
    if point.len() != m {
        return Err(ProbeDimensionMismatch {
            expected: m,
            got: point.len(),
        });
    }
    let q = pencil.matrix_at(point);
    let phi_value = determinant(&q).expect("pencil matrices are square");
    let adj = adjugate(&q).expect("pencil matrices are square");
    let gradient: Vec<Rational> = pencil.basis.iter().map(|f| adj.matmul(f).trace()).collect();
    let singular = phi_value.is_zero() && gradient.iter().all(|g| g.is_zero());
    let symbolic_det = if m <= SYMBOLIC_MAX_PARAMS && pencil.dim() <= SYMBOLIC_MAX_DIM {
        Some(symbolic_determinant(pencil))
    } else {
        None
    };
    Ok(ProbeReport {
        phi_value,
        gradient,
        singular,
        symbolic_det,
    })
}

/// Determinant of the pencil as a polynomial in the parameters (variable `i`
/// is parameter `alpha_{i+1}`). Laplace expansion along the first remaining
/// row, memoized on the set of remaining columns.
pub fn symbolic_determinant(pencil: &Pencil) -> Polynomial {
    let n = pencil.dim();
    if n == 0 {
        return Polynomial::one();
    }
    // entries as polynomials in the parameters
    let entries: Vec<Vec<Polynomial>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut p = Polynomial::constant(-pencil.f0.get(i, j).clone());
                    for (k, f) in pencil.basis.iter().enumerate() {
                        let c = f.get(i, j);
                        if !c.is_zero() {
                            p = &p
                                + &Polynomial::from_term(
                                    crate::monomial::Monomial::var(k),
                                    c.clone(),
                                );
                        }
                    }
                    p
                })
                .collect()
        })
        .collect();

    // memo over column subsets: det of the submatrix formed by rows
    // n - popcount(mask) .. n-1 and the columns in mask
    let full: u32 = ((1u64 << n) - 1) as u32;
    let mut memo: Vec<Option<Polynomial>> = alloc::vec![None; 1 << n];
    memo[0] = Some(Polynomial::one());

    fn det_rec(
        mask: u32,
        n: usize,
        entries: &[Vec<Polynomial>],
        memo: &mut Vec<Option<Polynomial>>,
    ) -> Polynomial {
        if let Some(p) = &memo[mask as usize] {
            return p.clone();
        }
        let cols = mask.count_ones() as usize;
        let row = n - cols;
        let mut acc = Polynomial::zero();
        let mut sign_positive = true;
        for j in 0..n {
            if mask >> j & 1 == 0 {
                continue;
            }
            let sub = det_rec(mask & !(1 << j), n, entries, memo);
            let term = &entries[row][j] * &sub;
            acc = if sign_positive {
                &acc + &term
            } else {
                &acc - &term
            };
            sign_positive = !sign_positive;
        }
        memo[mask as usize] = Some(acc.clone());
        acc
    }

    det_rec(full, n, &entries, &mut memo)
}
