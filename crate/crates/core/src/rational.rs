//! Arbitrary-precision rational numbers, always kept in lowest terms.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar. `BigRational` normalizes on construction: the
/// denominator is positive and shares no factor with the numerator, so values
/// are canonical and comparable term-by-term.
pub type Rational = num_rational::BigRational;

/// Shorthand constructor from machine integers.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Integer as a rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Canonical-form check: lowest terms and positive denominator. Construction
/// through `Rational::new` guarantees this; the check exists so tests can
/// assert it after arithmetic.
pub fn is_canonical(r: &Rational) -> bool {
    if !r.denom().is_positive() {
        return false;
    }
    if r.numer().is_zero() {
        return r.denom().is_one();
    }
    r.numer().gcd(r.denom()).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_normalize() {
        assert_eq!(rat(2, 4), rat(1, 2));
        assert_eq!(rat(-2, -4), rat(1, 2));
        assert_eq!(rat(2, -4), rat(-1, 2));
        assert_eq!(rat(0, 7), rat_int(0));
        assert!(is_canonical(&rat(0, 7)));
    }

    #[test]
    fn arithmetic_stays_canonical() {
        let a = rat(3, 4) * rat(8, 9) + rat(-5, 6);
        assert!(is_canonical(&a));
        assert_eq!(a, rat(-1, 6));
    }
}
