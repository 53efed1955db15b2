//! Exit-code contract and file behavior of the `psatz` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn psatz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psatz"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn pipeline_succeeds_on_solvable_problem() {
    let tmp = tempfile::tempdir().unwrap();
    let cert_path = tmp.path().join("onevar.cert");
    let pencil_path = tmp.path().join("onevar.pencil");
    let out = psatz(&[
        "pipeline",
        data("onevar.psatz").to_str().unwrap(),
        "--emit-cert",
        cert_path.to_str().unwrap(),
        "--emit-pencil",
        pencil_path.to_str().unwrap(),
    ]);
    assert_eq!(
        code(&out),
        0,
        "stdout: {} stderr: {}",
        stdout(&out),
        stderr(&out)
    );
    assert!(stdout(&out).contains("certificate verified exactly"));
    assert!(stdout(&out).contains("= -1"));

    // the emitted certificate verifies on its own
    let out = psatz(&[
        "verify",
        data("onevar.psatz").to_str().unwrap(),
        cert_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("VALID"));

    // and the emitted pencil solves on its own
    let out = psatz(&["solve", pencil_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("exactly feasible point"));
}

#[test]
fn verify_accepts_the_stock_witness_file() {
    let out = psatz(&[
        "verify",
        data("onevar.psatz").to_str().unwrap(),
        data("onevar_witness.cert").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("VALID"));
}

#[test]
fn verify_rejects_corrupted_gram_entry_with_exit_4() {
    let tmp = tempfile::tempdir().unwrap();
    let cert = std::fs::read_to_string(data("onevar_witness.cert")).unwrap();
    let bad = cert.replace("0 1/3", "0 -1/3");
    assert_ne!(bad, cert);
    let bad_path = tmp.path().join("bad.cert");
    std::fs::write(&bad_path, bad).unwrap();
    let out = psatz(&[
        "verify",
        data("onevar.psatz").to_str().unwrap(),
        bad_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 4);
    assert!(
        stdout(&out).contains("not positive semidefinite"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn verify_rejects_foreign_certificate_with_exit_4() {
    let tmp = tempfile::tempdir().unwrap();
    // a different (satisfiable) system over the same variable
    let other = "vars y\n-1 + y^2 >= 0\n1 - y^4 >= 0\n";
    let prob_path = tmp.path().join("other.psatz");
    std::fs::write(&prob_path, other).unwrap();
    let out = psatz(&[
        "verify",
        prob_path.to_str().unwrap(),
        data("onevar_witness.cert").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 4);
    assert!(stdout(&out).contains("residual"), "{}", stdout(&out));
}

#[test]
fn parse_errors_exit_1_with_position() {
    let tmp = tempfile::tempdir().unwrap();
    let bad_path = tmp.path().join("bad.psatz");
    std::fs::write(&bad_path, "vars y\ny^2 > 0\n").unwrap();
    let out = psatz(&["pipeline", bad_path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let err = stderr(&out);
    assert!(err.contains("line 2"), "{err}");
    assert!(err.contains("strict"), "{err}");

    let out = psatz(&[
        "pipeline",
        tmp.path().join("missing.psatz").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);

    let out = psatz(&[
        "assemble",
        data("onevar.psatz").to_str().unwrap(),
        "--degree-cap",
        "3",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("even"), "{}", stderr(&out));
}

#[test]
fn stalled_solve_exits_2_with_probe_report() {
    let out = psatz(&["solve", data("unique_point.pencil").to_str().unwrap()]);
    assert_eq!(code(&out), 2, "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("stalled"), "{text}");
    assert!(text.contains("degeneracy probe"), "{text}");
    assert!(text.contains("singular point: yes"), "{text}");
}

#[test]
fn degenerate_problem_pipeline_exits_2_with_probe() {
    // the two-variable system assembles into a degenerate search under the
    // default shape too: the numeric phase stalls and the run reports the
    // probe instead of claiming anything
    let out = psatz(&["pipeline", data("twovar.psatz").to_str().unwrap()]);
    assert_eq!(code(&out), 2, "{}", stdout(&out));
    let text = stdout(&out);
    assert!(
        text.contains("stalled") || text.contains("likely infeasible"),
        "{text}"
    );
    assert!(text.contains("degeneracy probe"), "{text}");
    assert!(text.contains("no unsatisfiability claim"), "{text}");
}

#[test]
fn sliced_reference_pencil_solves_exactly() {
    let out = psatz(&[
        "solve",
        data("twovar_reference.pencil").to_str().unwrap(),
        "--slice",
        "-9*a1+a2=-10",
    ]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(
        stdout(&out).contains("exactly feasible point"),
        "{}",
        stdout(&out)
    );

    // a relation over unknown parameter names is a usage error
    let out = psatz(&[
        "solve",
        data("twovar_reference.pencil").to_str().unwrap(),
        "--slice",
        "zz = 1",
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn probe_reports_exact_values() {
    let out = psatz(&[
        "probe",
        data("unique_point.pencil").to_str().unwrap(),
        "--at",
        "5,-7",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("det = 0"), "{text}");
    assert!(text.contains("grad det = (0, 0)"), "{text}");
    assert!(text.contains("singular point: yes"), "{text}");
    assert!(text.contains("det as polynomial"), "{text}");

    // wrong dimension
    let out = psatz(&[
        "probe",
        data("unique_point.pencil").to_str().unwrap(),
        "--at",
        "1,2,3",
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn assemble_emits_reusable_pencil() {
    let tmp = tempfile::tempdir().unwrap();
    let pencil_path = tmp.path().join("assembled.pencil");
    let out = psatz(&[
        "assemble",
        data("onevar.psatz").to_str().unwrap(),
        "--emit-pencil",
        pencil_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("assembled"));
    let emitted = std::fs::read_to_string(&pencil_path).unwrap();
    // emitted text parses back to the identical pencil and re-emits the
    // identical bytes
    let (pencil, vars) = psatz::format::parse_pencil(&emitted).unwrap();
    assert_eq!(psatz::format::emit_pencil(&pencil, &vars), emitted);
}

#[test]
fn usage_errors_exit_1_not_2() {
    // flag-range violations and clap-level usage errors both map to 1;
    // 2 stays reserved for numeric-search failure
    let out = psatz(&["solve", data("unique_point.pencil").to_str().unwrap(), "--tol", "-1"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("positive"), "{}", stderr(&out));

    let out = psatz(&["solve", data("unique_point.pencil").to_str().unwrap(), "--max-den", "0"]);
    assert_eq!(code(&out), 1);

    let out = psatz(&["frobnicate"]);
    assert_eq!(code(&out), 1);
}
