//! Shared fixture loading for the integration suites.
#![allow(dead_code)] // each test binary uses a different subset

use psatz::format::parse_pencil;
use psatz::parse::parse_problem;
use psatz_core::monomial::Monomial;
use psatz_core::problem::Problem;
use psatz_core::reduction::{Pencil, ShapeBlock, WitnessShape};

pub fn data(name: &str) -> String {
    let path = format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("cannot read {path}: {e}"))
}

/// `-2 + y^2 >= 0`, `1 - y^4 >= 0`.
pub fn one_var_problem() -> Problem {
    parse_problem(&data("onevar.psatz")).unwrap()
}

/// The same system after `y := 3a + b + 1`.
pub fn two_var_problem() -> Problem {
    parse_problem(&data("twovar.psatz")).unwrap()
}

/// Pencil with solution segment on the line `a2 = -3/11`, `91(a1+a3) = 1811`.
pub fn line_segment_pencil() -> Pencil {
    parse_pencil(&data("line_segment.pencil")).unwrap().0
}

/// Pencil whose only PSD point is `(5, -7)`, with a rank-one matrix there.
pub fn unique_point_pencil() -> Pencil {
    parse_pencil(&data("unique_point.pencil")).unwrap().0
}

/// Reference pencil for the two-variable problem, in the basis whose
/// solution set lies in the plane `-9*a1 + a2 = -10`.
pub fn two_var_reference_pencil() -> Pencil {
    parse_pencil(&data("twovar_reference.pencil")).unwrap().0
}

/// The hand-chosen 3+1+4 certificate shape for the two-variable problem:
/// Q1 over (1, a, b) against P1, Q2 over (1) against P2, Q3 over
/// (1, a, b, ab) against the empty product.
pub fn two_var_shape() -> WitnessShape {
    let one = Monomial::one();
    let a = Monomial::var(0);
    let b = Monomial::var(1);
    let ab = a.mul(&b);
    WitnessShape {
        blocks: vec![
            ShapeBlock {
                mask: 1,
                monomials: vec![one.clone(), a.clone(), b.clone()],
            },
            ShapeBlock {
                mask: 2,
                monomials: vec![one.clone()],
            },
            ShapeBlock {
                mask: 0,
                monomials: vec![one, a, b, ab],
            },
        ],
        multiplier_degrees: vec![],
    }
}

pub fn test_seed() -> u64 {
    std::env::var("PSATZ_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0x5eed_2010)
}
