//! Unsatisfiability-witness search for conjunctions of polynomial constraints.
//!
//! Given a system of wide polynomial inequalities `P_i >= 0` and equalities
//! `Z_j = 0` over the rationals, a witness of the form
//!
//! ```text
//!   sum_R  M_R^T Q_R M_R * R  +  sum_j lambda_j * Z_j  =  -1
//! ```
//!
//! (where each `R` is a product of a subset of the `P_i`, each `Q_R` is a
//! positive semidefinite Gram matrix over a monomial vector `M_R`, and the
//! `lambda_j` are arbitrary polynomial multipliers) proves that the system has
//! no real solution: every summand is nonnegative at a solution, but the right
//! side is negative.
//!
//! The crate is organized as a pipeline:
//!
//! * [`poly`] / [`problem`]: exact sparse multivariate polynomial algebra
//!   over arbitrary-precision rationals;
//! * [`linalg`]: exact rational dense linear algebra: Gaussian elimination,
//!   characteristic polynomials, an exact PSD test, and the `U^T D U`
//!   decomposition that turns a Gram matrix into an explicit sum of squares;
//! * [`reduction`]: translation of the witness equation into an affine
//!   matrix pencil `-F0 + span(F1..Fm)` whose PSD points are witnesses;
//! * [`solver`]: floating-point semidefinite feasibility search plus
//!   continued-fraction recovery of exact rational parameters;
//! * [`probe`]: exact diagnostics for the degeneracy that makes the numeric
//!   search fail (determinant pencil and its differential);
//! * [`verifier`]: the trusted core: exact-arithmetic certificate checking.
//!
//! Everything outside [`solver`] works in exact rational arithmetic. The
//! crate is `no_std` (with `alloc`); floating-point math in the solver goes
//! through `num-traits`/`libm` when the `std` feature is disabled.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(any(feature = "std", test))]
extern crate std;

pub mod linalg;
pub mod monomial;
pub mod poly;
pub mod probe;
pub mod problem;
pub mod rational;
pub mod reduction;
pub mod solver;
pub mod verifier;

pub use linalg::{
    gauss_solve_affine, is_psd_exact, ldlt, AffineSolution, LdltResult, PsdVerdict, RatMatrix,
};
pub use monomial::{Monomial, Var};
pub use poly::{product_closure, Polynomial, SubsetMask};
pub use probe::{degeneracy_probe, ProbeReport};
pub use problem::Problem;
pub use rational::Rational;
pub use reduction::{
    assemble, default_shape, reconstruct_certificate, slice, AffineRelation, Certificate, Pencil,
    WitnessShape,
};
pub use solver::{
    float_eigenvalues, rationalize, rationalize_one, slice_by_estimate, solve_feasibility,
    SolveOutcome, SolveStatus,
};
pub use verifier::{verify, verify_from_alpha, Verdict};
