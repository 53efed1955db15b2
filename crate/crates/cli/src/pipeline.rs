//! End-to-end command implementations, shared by the binary and the test
//! suites. Exit-code contract:
//!
//! * 0: success (exact verification passed where applicable)
//! * 1: parse/usage/IO error
//! * 2: numeric phase failed to produce an exactly verified result
//!   (solver stalled, flagged likely-infeasible, or its rationalization did
//!   not verify); a degeneracy probe report accompanies this outcome
//! * 3: the chosen shape admits no certificate (inconsistent identity)
//! * 4: certificate verification failed
//!
//! Unsatisfiability is never claimed without an exactly verified
//! certificate.

use std::fmt::Write as _;

use psatz_core::linalg::is_psd_exact;
use psatz_core::poly::mask_product;
use psatz_core::probe::{degeneracy_probe, ProbeReport};
use psatz_core::problem::Problem;
use psatz_core::rational::Rational;
use psatz_core::reduction::{
    assemble, default_shape, reconstruct_certificate, slice, AssembleError, Certificate, Pencil,
    WitnessShape,
};
use psatz_core::solver::{rationalize, solve_feasibility, SolveOutcome, SolveStatus};
use psatz_core::verifier::{verify, BlockSos, Invalidity, Verdict};

use crate::format::mask_to_text;
use crate::parse::{parse_relation, ParseError};

#[derive(Clone, Copy, Debug)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub max_den: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-9,
            max_iter: 150,
            max_den: 1_000_000,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ShapeOptions {
    pub degree_cap: u32,
    pub product_cap: usize,
}

impl Default for ShapeOptions {
    fn default() -> Self {
        ShapeOptions {
            degree_cap: 4,
            product_cap: 1024,
        }
    }
}

/// Outcome of the full problem pipeline (assemble, solve, rationalize,
/// verify).
pub enum PipelineOutcome {
    /// Exit 0: an exactly verified certificate.
    Verified {
        pencil: Pencil,
        alpha: Vec<Rational>,
        certificate: Certificate,
        sos_form: Vec<BlockSos>,
    },
    /// Exit 2: the numeric search failed; report and probe attached.
    NumericFailed {
        pencil: Pencil,
        outcome: SolveOutcome,
        probe: ProbeReport,
        probe_point: Vec<Rational>,
    },
    /// Exit 3: no certificate of the chosen shape exists.
    ShapeInfeasible,
}

#[derive(Debug)]
pub enum PipelineError {
    /// Exit 1: bad shape parameters or slicing relations.
    Usage(String),
}

impl From<ParseError> for PipelineError {
    fn from(e: ParseError) -> Self {
        PipelineError::Usage(format!("bad slicing relation: {e}"))
    }
}

fn denominator_ladder(max_den: u64) -> Vec<u64> {
    let mut ladder = vec![10, 1000];
    ladder.push(max_den);
    ladder.push(max_den.saturating_mul(1000));
    ladder.retain(|&d| d >= 1);
    ladder.sort_unstable();
    ladder.dedup();
    ladder
}

/// Apply textual slicing relations (parsed against the current parameter
/// names) in order.
pub fn apply_slices(pencil: Pencil, slices: &[String]) -> Result<Pencil, PipelineError> {
    let mut current = pencil;
    for text in slices {
        let relation = parse_relation(text, &current.param_names)?;
        current = slice(&current, &relation)
            .map_err(|e| PipelineError::Usage(format!("cannot slice by `{text}`: {e}")))?;
    }
    Ok(current)
}

/// Assemble `prob` under the default shape for the given caps, slice, solve,
/// rationalize, and verify exactly.
pub fn run_pipeline(
    prob: &Problem,
    shape_opts: ShapeOptions,
    slices: &[String],
    solver_opts: SolverOptions,
) -> Result<PipelineOutcome, PipelineError> {
    let shape = default_shape(prob, shape_opts.degree_cap, shape_opts.product_cap)
        .map_err(|e| PipelineError::Usage(e.to_string()))?;
    run_pipeline_with_shape(prob, &shape, slices, solver_opts)
}

/// Same pipeline with an explicit certificate shape.
pub fn run_pipeline_with_shape(
    prob: &Problem,
    shape: &WitnessShape,
    slices: &[String],
    solver_opts: SolverOptions,
) -> Result<PipelineOutcome, PipelineError> {
    let pencil = match assemble(prob, shape) {
        Ok(p) => p,
        Err(AssembleError::NoCertificateOfShape) => return Ok(PipelineOutcome::ShapeInfeasible),
        Err(AssembleError::Shape(e)) => return Err(PipelineError::Usage(e.to_string())),
    };
    let pencil = apply_slices(pencil, slices)?;
    let outcome = solve_feasibility(&pencil, solver_opts.tol, solver_opts.max_iter);

    if outcome.status == SolveStatus::Feasible {
        // rationalization ladder: coarse convergents land deep inside the
        // feasible set and give small certificates; finer ones cover thin
        // margins
        for max_den in denominator_ladder(solver_opts.max_den) {
            let alpha = rationalize(&outcome.alpha, max_den);
            let certificate = reconstruct_certificate(&pencil, &alpha)
                .expect("solver alpha matches pencil parameter count");
            if let Verdict::Valid { sos_form } = verify(prob, &certificate) {
                return Ok(PipelineOutcome::Verified {
                    pencil,
                    alpha,
                    certificate,
                    sos_form,
                });
            }
        }
    }

    let probe_point = rationalize(&outcome.alpha, solver_opts.max_den);
    let probe = degeneracy_probe(&pencil, &probe_point)
        .expect("solver alpha matches pencil parameter count");
    Ok(PipelineOutcome::NumericFailed {
        pencil,
        outcome,
        probe,
        probe_point,
    })
}

/// Outcome of solving a standalone pencil (no problem/certificate layer):
/// exit 0 needs the rationalized point to be exactly PSD.
pub enum SolveReport {
    /// Exit 0.
    ExactlyFeasible {
        alpha: Vec<Rational>,
        outcome: Option<SolveOutcome>,
    },
    /// Exit 2.
    Failed {
        outcome: Option<SolveOutcome>,
        probe: ProbeReport,
        probe_point: Vec<Rational>,
    },
}

pub fn solve_pencil(pencil: &Pencil, opts: SolverOptions) -> SolveReport {
    if pencil.param_count() == 0 {
        // terminal case: one exact PSD test decides
        let verdict = is_psd_exact(&pencil.matrix_at(&[])).expect("pencil matrices symmetric");
        let probe = degeneracy_probe(pencil, &[]).expect("zero-parameter point");
        return if verdict.is_psd {
            SolveReport::ExactlyFeasible {
                alpha: Vec::new(),
                outcome: None,
            }
        } else {
            SolveReport::Failed {
                outcome: None,
                probe,
                probe_point: Vec::new(),
            }
        };
    }
    let outcome = solve_feasibility(pencil, opts.tol, opts.max_iter);
    if outcome.status == SolveStatus::Feasible {
        for max_den in denominator_ladder(opts.max_den) {
            let alpha = rationalize(&outcome.alpha, max_den);
            if is_psd_exact(&pencil.matrix_at(&alpha))
                .expect("pencil matrices symmetric")
                .is_psd
            {
                return SolveReport::ExactlyFeasible {
                    alpha,
                    outcome: Some(outcome),
                };
            }
        }
    }
    let probe_point = rationalize(&outcome.alpha, opts.max_den);
    let probe = degeneracy_probe(pencil, &probe_point).expect("parameter count matches");
    SolveReport::Failed {
        outcome: Some(outcome),
        probe,
        probe_point,
    }
}

/// Human-readable witness line: one `(Q_R polynomial) * (R)` summand per
/// block with a nonzero Gram matrix, then the multipliers, ending `= -1`.
pub fn witness_equation_text(prob: &Problem, cert: &Certificate) -> String {
    let names = prob.variables();
    let mut parts: Vec<String> = Vec::new();
    for block in &cert.blocks {
        if block.gram.is_zero() {
            continue;
        }
        let mut quad = psatz_core::poly::Polynomial::zero();
        for i in 0..block.monomials.len() {
            for j in 0..block.monomials.len() {
                let c = block.gram.get(i, j);
                if !num_traits::Zero::is_zero(c) {
                    quad = &quad
                        + &psatz_core::poly::Polynomial::from_term(
                            block.monomials[i].mul(&block.monomials[j]),
                            c.clone(),
                        );
                }
            }
        }
        let product = mask_product(prob.inequalities(), block.mask);
        if block.mask == 0 {
            parts.push(format!("({})", quad.display(names)));
        } else {
            parts.push(format!(
                "({})*({})",
                quad.display(names),
                product.display(names)
            ));
        }
    }
    for (lambda, z) in cert.multipliers.iter().zip(prob.equalities()) {
        if lambda.is_zero() {
            continue;
        }
        parts.push(format!(
            "({})*({})",
            lambda.display(names),
            z.display(names)
        ));
    }
    if parts.is_empty() {
        parts.push("0".to_string());
    }
    format!("{} = -1", parts.join(" + "))
}

/// Per-block weighted-squares rendering of a Valid verdict.
pub fn sos_form_text(sos_form: &[BlockSos], names: &[String]) -> String {
    let mut out = String::new();
    for block in sos_form {
        let terms: Vec<String> = block
            .squares
            .iter()
            .map(|(d, l)| format!("{}*({})^2", d, l.display(names)))
            .collect();
        let body = if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        };
        let _ = writeln!(out, "  block {}: {}", mask_to_text(block.mask), body);
    }
    out
}

/// Structured text report for a solve outcome.
pub fn outcome_text(outcome: &SolveOutcome, param_names: &[String]) -> String {
    let mut out = String::new();
    let status = match outcome.status {
        SolveStatus::Feasible => "feasible (float)",
        SolveStatus::Stalled => "stalled",
        SolveStatus::LikelyInfeasible => "likely infeasible (heuristic, not a proof)",
    };
    let _ = writeln!(out, "status: {status}");
    for (name, a) in param_names.iter().zip(&outcome.alpha) {
        let _ = writeln!(out, "  {name} ~ {a:.12}");
    }
    let _ = writeln!(
        out,
        "  min eigenvalue estimate: {:.3e}",
        outcome.min_eig_estimate
    );
    if let (Some(first), Some(last)) = (outcome.mu_trace.first(), outcome.mu_trace.last()) {
        let _ = writeln!(
            out,
            "  mu trace: {:.3e} -> {:.3e} over {} iterations",
            first,
            last,
            outcome.mu_trace.len()
        );
    }
    out
}

pub fn probe_text(probe: &ProbeReport, point: &[Rational], param_names: &[String]) -> String {
    let mut out = String::new();
    let pt: Vec<String> = param_names
        .iter()
        .zip(point)
        .map(|(n, v)| format!("{n} = {v}"))
        .collect();
    let _ = writeln!(
        out,
        "degeneracy probe at {}:",
        if pt.is_empty() {
            "()".to_string()
        } else {
            pt.join(", ")
        }
    );
    let _ = writeln!(out, "  det = {}", probe.phi_value);
    let grad: Vec<String> = probe.gradient.iter().map(|g| g.to_string()).collect();
    let _ = writeln!(out, "  grad det = ({})", grad.join(", "));
    let _ = writeln!(
        out,
        "  singular point: {}",
        if probe.singular { "yes" } else { "no" }
    );
    if let Some(det) = &probe.symbolic_det {
        let _ = writeln!(out, "  det as polynomial: {}", det.display(param_names));
    }
    out
}

/// Exit code for a verification verdict, with its report text.
pub fn verdict_text(verdict: &Verdict, prob: &Problem, cert: &Certificate) -> (i32, String) {
    match verdict {
        Verdict::Valid { sos_form } => {
            let mut out = String::from("certificate: VALID\n");
            let _ = writeln!(out, "witness: {}", witness_equation_text(prob, cert));
            out.push_str(&sos_form_text(sos_form, prob.variables()));
            (0, out)
        }
        Verdict::Invalid(reason) => {
            let text = match reason {
                Invalidity::ShapeMismatch(s) => format!("certificate: INVALID (shape mismatch: {s})\n"),
                Invalidity::BlockNotPsd { block, verdict } => format!(
                    "certificate: INVALID (block {block} is not positive semidefinite; sign condition fails at coefficient {:?})\n",
                    verdict.failing_index
                ),
                Invalidity::ResidualNonzero { residual } => format!(
                    "certificate: INVALID (residual {} should be 0)\n",
                    residual.display(prob.variables())
                ),
            };
            (4, text)
        }
    }
}
