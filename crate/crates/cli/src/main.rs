use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use psatz::format::{emit_certificate, emit_pencil, parse_certificate, parse_pencil};
use psatz::parse::{parse_point, parse_problem};
use psatz::pipeline::{
    apply_slices, outcome_text, probe_text, run_pipeline, solve_pencil, verdict_text,
    PipelineError, PipelineOutcome, ShapeOptions, SolveReport, SolverOptions,
};
use psatz_core::probe::degeneracy_probe;
use psatz_core::verifier::verify;

/// Searches for Positivstellensatz unsatisfiability witnesses: assembles the
/// sum-of-squares search as a semidefinite feasibility problem, attempts a
/// numeric solution, recovers exact rational certificates, and verifies them
/// in exact arithmetic.
#[derive(Parser)]
#[command(name = "psatz", version, arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ShapeArgs {
    /// Even total-degree cap for the default certificate shape.
    #[arg(long, default_value_t = 4)]
    degree_cap: u32,
    /// Refuse to enumerate more than this many subset products.
    #[arg(long, default_value_t = 1024)]
    product_cap: usize,
}

#[derive(Args, Clone)]
struct SolverArgs {
    /// Feasibility tolerance on the normalized pencil.
    #[arg(long, default_value_t = 1e-9, allow_negative_numbers = true)]
    tol: f64,
    /// Interior-point iteration budget.
    #[arg(long, default_value_t = 150)]
    max_iter: usize,
    /// Denominator bound for continued-fraction rationalization.
    #[arg(long, default_value_t = 1_000_000)]
    max_den: u64,
}

impl SolverArgs {
    fn options(&self) -> Result<SolverOptions, i32> {
        if !(self.tol > 0.0) {
            eprintln!("error: --tol must be positive");
            return Err(1);
        }
        if self.max_den == 0 {
            eprintln!("error: --max-den must be at least 1");
            return Err(1);
        }
        if self.max_iter == 0 {
            eprintln!("error: --max-iter must be at least 1");
            return Err(1);
        }
        Ok(SolverOptions {
            tol: self.tol,
            max_iter: self.max_iter,
            max_den: self.max_den,
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Assemble a problem into a matrix pencil and print or save it.
    Assemble {
        problem: PathBuf,
        #[command(flatten)]
        shape: ShapeArgs,
        /// Write the pencil here instead of stdout.
        #[arg(long)]
        emit_pencil: Option<PathBuf>,
    },
    /// Search a pencil file for an exactly feasible (PSD) parameter point.
    Solve {
        pencil: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// Affine relation over the parameters to slice by (repeatable).
        #[arg(long = "slice", allow_hyphen_values = true)]
        slices: Vec<String>,
    },
    /// Exact degeneracy diagnostics for a pencil at a rational point.
    Probe {
        pencil: PathBuf,
        /// Comma-separated rational parameter values, e.g. "2,8,79".
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        at: String,
    },
    /// Check a certificate against a problem in exact arithmetic.
    Verify {
        problem: PathBuf,
        certificate: PathBuf,
    },
    /// Full run: assemble, slice, solve, rationalize, verify.
    Pipeline {
        problem: PathBuf,
        #[command(flatten)]
        shape: ShapeArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long = "slice", allow_hyphen_values = true)]
        slices: Vec<String>,
        /// Write the (sliced) pencil here.
        #[arg(long)]
        emit_pencil: Option<PathBuf>,
        /// Write the verified certificate here.
        #[arg(long)]
        emit_cert: Option<PathBuf>,
    },
}

fn read_file(path: &PathBuf) -> Result<String, i32> {
    fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        1
    })
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), i32> {
    fs::write(path, contents).map_err(|e| {
        eprintln!("error: cannot write {}: {e}", path.display());
        1
    })
}

fn run() -> Result<i32, i32> {
    // clap's own exit code for usage errors is 2, which this tool reserves
    // for numeric-search failure; remap usage problems to 1
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            print!("{e}");
            return Ok(0);
        }
        Err(e) => {
            eprint!("{e}");
            return Ok(1);
        }
    };
    match cli.command {
        Command::Assemble {
            problem,
            shape,
            emit_pencil: emit_path,
        } => {
            let prob = parse_problem(&read_file(&problem)?).map_err(|e| {
                eprintln!("error: {}: {e}", problem.display());
                1
            })?;
            let shape =
                psatz_core::reduction::default_shape(&prob, shape.degree_cap, shape.product_cap)
                    .map_err(|e| {
                        eprintln!("error: {e}");
                        1
                    })?;
            match psatz_core::reduction::assemble(&prob, &shape) {
                Ok(pencil) => {
                    let text = emit_pencil(&pencil, prob.variables());
                    match emit_path {
                        Some(p) => write_file(&p, &text)?,
                        None => print!("{text}"),
                    }
                    println!(
                        "assembled: dimension {}, {} parameters",
                        pencil.dim(),
                        pencil.param_count()
                    );
                    Ok(0)
                }
                Err(psatz_core::reduction::AssembleError::NoCertificateOfShape) => {
                    eprintln!(
                        "{}",
                        psatz_core::reduction::AssembleError::NoCertificateOfShape
                    );
                    Ok(3)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    Ok(1)
                }
            }
        }
        Command::Solve {
            pencil,
            solver,
            slices,
        } => {
            let (parsed, _vars) = parse_pencil(&read_file(&pencil)?).map_err(|e| {
                eprintln!("error: {}: {e}", pencil.display());
                1
            })?;
            let sliced = match apply_slices(parsed, &slices) {
                Ok(p) => p,
                Err(PipelineError::Usage(msg)) => {
                    eprintln!("error: {msg}");
                    return Ok(1);
                }
            };
            match solve_pencil(&sliced, solver.options()?) {
                SolveReport::ExactlyFeasible { alpha, outcome } => {
                    if let Some(o) = &outcome {
                        print!("{}", outcome_text(o, &sliced.param_names));
                    }
                    let vals: Vec<String> = sliced
                        .param_names
                        .iter()
                        .zip(&alpha)
                        .map(|(n, v)| format!("{n} = {v}"))
                        .collect();
                    println!(
                        "exactly feasible point: {}",
                        if vals.is_empty() {
                            "()".into()
                        } else {
                            vals.join(", ")
                        }
                    );
                    Ok(0)
                }
                SolveReport::Failed {
                    outcome,
                    probe,
                    probe_point,
                } => {
                    if let Some(o) = &outcome {
                        print!("{}", outcome_text(o, &sliced.param_names));
                    }
                    print!("{}", probe_text(&probe, &probe_point, &sliced.param_names));
                    println!("no exactly verified point found");
                    Ok(2)
                }
            }
        }
        Command::Probe { pencil, at } => {
            let (parsed, _vars) = parse_pencil(&read_file(&pencil)?).map_err(|e| {
                eprintln!("error: {}: {e}", pencil.display());
                1
            })?;
            let point = parse_point(&at).map_err(|e| {
                eprintln!("error: bad --at point: {e}");
                1
            })?;
            let point = if point.is_empty() && parsed.param_count() > 0 {
                vec![psatz_core::rational::rat_int(0); parsed.param_count()]
            } else {
                point
            };
            match degeneracy_probe(&parsed, &point) {
                Ok(report) => {
                    print!("{}", probe_text(&report, &point, &parsed.param_names));
                    Ok(0)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    Ok(1)
                }
            }
        }
        Command::Verify {
            problem,
            certificate,
        } => {
            let prob = parse_problem(&read_file(&problem)?).map_err(|e| {
                eprintln!("error: {}: {e}", problem.display());
                1
            })?;
            let (cert, _vars) = parse_certificate(&read_file(&certificate)?).map_err(|e| {
                eprintln!("error: {}: {e}", certificate.display());
                1
            })?;
            let verdict = verify(&prob, &cert);
            let (code, text) = verdict_text(&verdict, &prob, &cert);
            print!("{text}");
            Ok(code)
        }
        Command::Pipeline {
            problem,
            shape,
            solver,
            slices,
            emit_pencil: emit_pencil_path,
            emit_cert,
        } => {
            let prob = parse_problem(&read_file(&problem)?).map_err(|e| {
                eprintln!("error: {}: {e}", problem.display());
                1
            })?;
            let shape_opts = ShapeOptions {
                degree_cap: shape.degree_cap,
                product_cap: shape.product_cap,
            };
            let result = match run_pipeline(&prob, shape_opts, &slices, solver.options()?) {
                Ok(r) => r,
                Err(PipelineError::Usage(msg)) => {
                    eprintln!("error: {msg}");
                    return Ok(1);
                }
            };
            match result {
                PipelineOutcome::Verified {
                    pencil,
                    alpha,
                    certificate,
                    sos_form,
                } => {
                    if let Some(p) = emit_pencil_path {
                        write_file(&p, &emit_pencil(&pencil, prob.variables()))?;
                    }
                    if let Some(p) = emit_cert {
                        write_file(&p, &emit_certificate(&certificate, prob.variables()))?;
                    }
                    let vals: Vec<String> = pencil
                        .param_names
                        .iter()
                        .zip(&alpha)
                        .map(|(n, v)| format!("{n} = {v}"))
                        .collect();
                    println!("unsatisfiable: certificate verified exactly");
                    if !vals.is_empty() {
                        println!("parameters: {}", vals.join(", "));
                    }
                    println!(
                        "witness: {}",
                        psatz::pipeline::witness_equation_text(&prob, &certificate)
                    );
                    print!(
                        "{}",
                        psatz::pipeline::sos_form_text(&sos_form, prob.variables())
                    );
                    Ok(0)
                }
                PipelineOutcome::NumericFailed {
                    pencil,
                    outcome,
                    probe,
                    probe_point,
                } => {
                    if let Some(p) = emit_pencil_path {
                        write_file(&p, &emit_pencil(&pencil, prob.variables()))?;
                    }
                    print!("{}", outcome_text(&outcome, &pencil.param_names));
                    print!("{}", probe_text(&probe, &probe_point, &pencil.param_names));
                    println!("numeric search failed; no unsatisfiability claim is made");
                    Ok(2)
                }
                PipelineOutcome::ShapeInfeasible => {
                    println!(
                        "no certificate of this shape exists (larger shapes may still succeed)"
                    );
                    Ok(3)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) | Err(code) => ExitCode::from(code as u8),
    }
}
