//! Exact certificate checking: the trusted core.
//!
//! A certificate is accepted iff (a) every Gram block is positive
//! semidefinite in exact arithmetic, and (b) the witness equation
//! `sum_R M^T Q M * R + sum_j lambda_j Z_j + 1 = 0` holds as an exact
//! polynomial identity. Nothing that reaches this module is floating point:
//! whatever the numeric search produced must have been rationalized first,
//! and the verdict stands on exact arithmetic alone. A certificate found by
//! searching only a corner of the huge shape space is still a correct
//! certificate; this module is what makes that claim trustworthy.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::linalg::{gram_to_sos, is_psd_exact, PsdVerdict};
use crate::poly::{Polynomial, SubsetMask};
use crate::problem::Problem;
use crate::rational::Rational;
use crate::reduction::{reconstruct_certificate, Certificate, ParamCountMismatch, Pencil};

/// Explicit sum-of-squares form of one verified Gram block.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BlockSos {
    pub mask: SubsetMask,
    /// Weighted squares `(d_i, l_i)` with `d_i >= 0`: the block's quadratic
    /// form equals `sum_i d_i * l_i^2` exactly.
    pub squares: Vec<(Rational, Polynomial)>,
}

/// Why a certificate was rejected.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Invalidity {
    ShapeMismatch(String),
    BlockNotPsd { block: usize, verdict: PsdVerdict },
    ResidualNonzero { residual: Polynomial },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Verdict {
    Valid { sos_form: Vec<BlockSos> },
    Invalid(Invalidity),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid { .. })
    }
}

/// Check `cert` against `prob` in exact arithmetic.
///
/// Shape problems are reported first, then the PSD check runs block by block
/// (first failure wins), and only then the residual identity is expanded.
/// On success the Gram blocks are also decomposed into explicit weighted
/// sums of squares for human-readable output.
pub fn verify(prob: &Problem, cert: &Certificate) -> Verdict {
    if let Some(problem) = shape_mismatch(prob, cert) {
        return Verdict::Invalid(Invalidity::ShapeMismatch(problem));
    }
    for (b, block) in cert.blocks.iter().enumerate() {
        match is_psd_exact(&block.gram) {
            Ok(verdict) if verdict.is_psd => {}
            Ok(verdict) => return Verdict::Invalid(Invalidity::BlockNotPsd { block: b, verdict }),
            Err(e) => {
                return Verdict::Invalid(Invalidity::ShapeMismatch(format!("block {b}: {e}")))
            }
        }
    }
    let residual = cert.residual(prob);
    if !residual.is_zero() {
        return Verdict::Invalid(Invalidity::ResidualNonzero { residual });
    }
    let sos_form = cert
        .blocks
        .iter()
        .map(|block| BlockSos {
            mask: block.mask,
            squares: gram_to_sos(&block.gram, &block.monomials)
                .expect("blocks already checked PSD"),
        })
        .collect();
    Verdict::Valid { sos_form }
}

fn shape_mismatch(prob: &Problem, cert: &Certificate) -> Option<String> {
    let n = prob.inequalities().len();
    let limit: SubsetMask = if n >= 64 {
        SubsetMask::MAX
    } else {
        (1 << n) - 1
    };
    if cert.multipliers.len() != prob.equalities().len() {
        return Some(format!(
            "{} multipliers for {} equalities",
            cert.multipliers.len(),
            prob.equalities().len()
        ));
    }
    for (b, block) in cert.blocks.iter().enumerate() {
        if block.mask & !limit != 0 {
            return Some(format!(
                "block {b} mask selects inequalities beyond the {n} in the problem"
            ));
        }
        if block.monomials.is_empty() {
            return Some(format!("block {b} has an empty monomial vector"));
        }
        for (i, m) in block.monomials.iter().enumerate() {
            if block.monomials[..i].contains(m) {
                return Some(format!("block {b} repeats a monomial"));
            }
        }
        if block.gram.rows() != block.monomials.len() || !block.gram.is_square() {
            return Some(format!(
                "block {b} Gram matrix is {}x{} for {} monomials",
                block.gram.rows(),
                block.gram.cols(),
                block.monomials.len()
            ));
        }
        if !block.gram.is_symmetric() {
            return Some(format!("block {b} Gram matrix is not symmetric"));
        }
        if let Some(v) = block.monomials.iter().filter_map(|m| m.max_var()).max() {
            if v >= prob.num_vars() {
                return Some(format!(
                    "block {b} mentions variable #{v}, problem declares {}",
                    prob.num_vars()
                ));
            }
        }
    }
    for (j, lambda) in cert.multipliers.iter().enumerate() {
        if let Some(v) = lambda.max_var() {
            if v >= prob.num_vars() {
                return Some(format!(
                    "multiplier {j} mentions variable #{v}, problem declares {}",
                    prob.num_vars()
                ));
            }
        }
    }
    None
}

/// Reconstruct the certificate at `alpha` and verify it. The residual check
/// passes by construction for points of an assembled pencil, so the decisive
/// test is exact PSD-ness of the blocks.
pub fn verify_from_alpha(
    pencil: &Pencil,
    alpha: &[Rational],
    prob: &Problem,
) -> Result<Verdict, ParamCountMismatch> {
    let cert = reconstruct_certificate(pencil, alpha)?;
    Ok(verify(prob, &cert))
}
