//! Round-trip and diagnostic tests for the text formats.

use psatz::format::{
    emit_certificate, emit_pencil, emit_problem, mask_from_text, mask_to_text, parse_certificate,
    parse_pencil,
};
use psatz::parse::{parse_point, parse_problem, parse_rational_str, parse_relation, DeclaredNames};
use psatz_core::rational::{rat, rat_int};
use psatz_core::reduction::{assemble, default_shape, reconstruct_certificate};

fn onevar_text() -> String {
    std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/onevar.psatz")).unwrap()
}

#[test]
fn problem_parses_and_round_trips() {
    let prob = parse_problem(&onevar_text()).unwrap();
    assert_eq!(prob.variables(), &["y".to_string()]);
    assert_eq!(prob.inequalities().len(), 2);
    assert!(prob.equalities().is_empty());
    let emitted = emit_problem(&prob);
    let reparsed = parse_problem(&emitted).unwrap();
    assert_eq!(reparsed, prob);
    assert_eq!(emit_problem(&reparsed), emitted);
}

#[test]
fn parse_errors_carry_positions() {
    let err = parse_problem("vars y\ny^2 > 0\n").unwrap_err();
    assert_eq!(err.line, 2);
    assert!(err.message.contains("strict"), "{}", err.message);

    let err = parse_problem("vars y\n3y >= 0\n").unwrap_err();
    assert_eq!(err.line, 2);
    assert!(err.message.contains("`*`"), "{}", err.message);

    let err = parse_problem("y >= 0\n").unwrap_err();
    assert_eq!(err.line, 1);
    assert!(err.message.contains("vars"));

    let err = parse_problem("vars y\nz + y >= 0\n").unwrap_err();
    assert!(err.message.contains("unknown variable `z`"));

    let err = parse_problem("vars y\ny >= 1\n").unwrap_err();
    assert!(err.message.contains("right-hand side"));
}

#[test]
fn expression_grammar_corner_cases() {
    let names = vec!["x".to_string(), "y".to_string()];
    let resolver = DeclaredNames(&names);
    let p = psatz::parse::parse_polynomial(1, "-(x - 2/3)^2 * 3 + y", &resolver).unwrap();
    // -(x^2 - 4/3 x + 4/9)*3 + y = -3x^2 + 4x - 4/3 + y
    let x = psatz_core::poly::Polynomial::variable(0);
    let y = psatz_core::poly::Polynomial::variable(1);
    let expect = &(&(&x.pow(2).scale(&rat_int(-3)) + &x.scale(&rat_int(4)))
        - &psatz_core::poly::Polynomial::constant(rat(4, 3)))
        + &y;
    assert_eq!(p, expect);

    assert!(psatz::parse::parse_polynomial(1, "x^-2", &resolver).is_err());
    assert!(psatz::parse::parse_polynomial(1, "x^(1/2)", &resolver).is_err());
    assert!(psatz::parse::parse_polynomial(1, "(x", &resolver).is_err());
    assert!(psatz::parse::parse_polynomial(1, "1/0", &resolver).is_err());
}

#[test]
fn masks_round_trip() {
    for mask in [0u64, 1, 2, 3, 0b1010, 0b111] {
        assert_eq!(mask_from_text(&mask_to_text(mask), 1).unwrap(), mask);
    }
    assert_eq!(mask_to_text(0), "{}");
    assert_eq!(mask_to_text(0b101), "{1,3}");
    assert!(mask_from_text("{0}", 1).is_err());
    assert!(mask_from_text("1,2", 1).is_err());
}

#[test]
fn rationals_and_points() {
    assert_eq!(parse_rational_str("-3/11"), Some(rat(-3, 11)));
    assert_eq!(parse_rational_str("42"), Some(rat_int(42)));
    assert_eq!(parse_rational_str("1/0"), None);
    assert_eq!(
        parse_point("2, 8, 79").unwrap(),
        vec![rat_int(2), rat_int(8), rat_int(79)]
    );
    assert_eq!(parse_point("").unwrap(), vec![]);
}

#[test]
fn relations_parse_against_parameter_names() {
    let names = vec!["a1".to_string(), "a2".to_string(), "a3".to_string()];
    let rel = parse_relation("-9*a1+a2=-10", &names).unwrap();
    assert_eq!(rel.coeffs, vec![rat_int(-9), rat_int(1), rat_int(0)]);
    assert_eq!(rel.constant, rat_int(-10));

    let rel = parse_relation("91*(a1 + a3) = 1811", &names).unwrap();
    assert_eq!(rel.coeffs, vec![rat_int(91), rat_int(0), rat_int(91)]);
    assert_eq!(rel.constant, rat_int(1811));

    // constants migrate across the equality sign
    let rel = parse_relation("a2 + 1/3 = 0", &names).unwrap();
    assert_eq!(rel.coeffs, vec![rat_int(0), rat_int(1), rat_int(0)]);
    assert_eq!(rel.constant, rat(-1, 3));

    assert!(parse_relation("a1*a2 = 1", &names).is_err());
    assert!(parse_relation("3 = 3", &names).is_err());
    assert!(parse_relation("b9 = 1", &names).is_err());
}

#[test]
fn pencil_files_round_trip_bit_exactly() {
    let prob = parse_problem(&onevar_text()).unwrap();
    let shape = default_shape(&prob, 4, 64).unwrap();
    let pencil = assemble(&prob, &shape).unwrap();
    let text = emit_pencil(&pencil, prob.variables());
    let (parsed, vars) = parse_pencil(&text).unwrap();
    assert_eq!(parsed, pencil);
    assert_eq!(vars, prob.variables());
    assert_eq!(emit_pencil(&parsed, &vars), text);
}

#[test]
fn pencil_with_multipliers_round_trips() {
    // equality constraints exercise the multiplier provenance sections
    let text = "vars x\nx >= 0\nx + 1 = 0\n";
    let prob = parse_problem(text).unwrap();
    let shape = default_shape(&prob, 2, 16).unwrap();
    let pencil = assemble(&prob, &shape).unwrap();
    assert!(!pencil.multipliers.is_empty());
    let emitted = emit_pencil(&pencil, prob.variables());
    let (parsed, _) = parse_pencil(&emitted).unwrap();
    assert_eq!(parsed, pencil);
}

#[test]
fn certificate_files_round_trip_bit_exactly() {
    let prob = parse_problem(&onevar_text()).unwrap();
    let shape = default_shape(&prob, 4, 64).unwrap();
    let pencil = assemble(&prob, &shape).unwrap();
    let alpha: Vec<_> = (0..pencil.param_count())
        .map(|i| rat(i as i64 + 1, 7))
        .collect();
    let cert = reconstruct_certificate(&pencil, &alpha).unwrap();
    let text = emit_certificate(&cert, prob.variables());
    let (parsed, vars) = parse_certificate(&text).unwrap();
    assert_eq!(parsed, cert);
    assert_eq!(emit_certificate(&parsed, &vars), text);
}

#[test]
fn fixture_pencils_parse() {
    for name in ["line_segment.pencil", "unique_point.pencil", "twovar_reference.pencil"] {
        let path = format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"));
        let text = std::fs::read_to_string(&path).unwrap();
        let (pencil, _) = parse_pencil(&text).unwrap();
        assert!(pencil.param_count() >= 2, "{name}");
        // canonical emission is idempotent
        let vars = if name == "twovar_reference.pencil" {
            vec!["a".to_string(), "b".to_string()]
        } else {
            vec![]
        };
        let emitted = emit_pencil(&pencil, &vars);
        let (reparsed, _) = parse_pencil(&emitted).unwrap();
        assert_eq!(reparsed, pencil);
    }
}
