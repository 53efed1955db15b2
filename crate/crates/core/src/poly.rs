//! Sparse multivariate polynomials over exact rationals.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::monomial::{Monomial, Var};
use crate::rational::Rational;

/// Polynomial as a map from monomial to nonzero coefficient. Two polynomials
/// are equal iff their term maps are equal; zero coefficients are never
/// stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Polynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Polynomial::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn variable(v: Var) -> Self {
        Polynomial::from_term(Monomial::var(v), Rational::one())
    }

    pub fn from_term(m: Monomial, c: Rational) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(&m, &c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(terms: I) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(&m, &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.total_degree())
            .max()
            .unwrap_or(0)
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coefficient(&Monomial::one())
    }

    /// Terms in ascending graded-lex order.
    pub fn iter_terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Variables occurring with nonzero exponent.
    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = Vec::new();
        for m in self.terms.keys() {
            for (v, _) in m.iter() {
                if let Err(i) = vs.binary_search(&v) {
                    vs.insert(i, v);
                }
            }
        }
        vs
    }

    pub fn max_var(&self) -> Option<Var> {
        self.terms.keys().filter_map(|m| m.max_var()).max()
    }

    fn add_term(&mut self, m: &Monomial, c: &Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(m) {
            Some(cur) => {
                *cur += c;
                if cur.is_zero() {
                    self.terms.remove(m);
                }
            }
            None => {
                self.terms.insert(m.clone(), c.clone());
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact evaluation. Every variable occurring in the polynomial must be
    /// assigned.
    pub fn eval(&self, point: &BTreeMap<Var, Rational>) -> Result<Rational, MissingAssignment> {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (v, e) in m.iter() {
                let x = point.get(&v).ok_or(MissingAssignment { var: v })?;
                for _ in 0..e {
                    term *= x;
                }
            }
            total += term;
        }
        Ok(total)
    }

    /// Replace `var` by `replacement` and expand to canonical form.
    pub fn substitute(&self, var: Var, replacement: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(var);
            let rest = Monomial::from_exps(m.iter().filter(|&(v, _)| v != var));
            if e == 0 {
                out.add_term(m, c);
            } else {
                let piece = replacement.pow(e).mul_monomial(&rest).scale(c);
                out = &out + &piece;
            }
        }
        out
    }

    /// Render with variable names; terms in descending graded-lex order.
    pub fn display<'a>(&'a self, names: &'a [String]) -> PolynomialDisplay<'a> {
        PolynomialDisplay { p: self, names }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m, c);
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m, &-c.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(&ma.mul(mb), &(ca * cb));
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

/// Evaluation hit a variable with no assigned value.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct MissingAssignment {
    pub var: Var,
}

impl fmt::Display for MissingAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "no value assigned to variable #{}", self.var)
    }
}

impl core::error::Error for MissingAssignment {}

pub struct PolynomialDisplay<'a> {
    p: &'a Polynomial,
    names: &'a [String],
}

impl fmt::Display for PolynomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.p.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", m.display(self.names))?;
            } else {
                write!(f, "{mag}*{}", m.display(self.names))?;
            }
        }
        Ok(())
    }
}

/// Bitmask selecting a subset of a problem's inequalities; bit `i` set means
/// inequality `i` participates in the product.
pub type SubsetMask = u64;

/// Total degree of the subset product without expanding it.
pub fn mask_degree(polys: &[Polynomial], mask: SubsetMask) -> u32 {
    polys
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, p)| p.degree())
        .sum()
}

/// Expand the product selected by `mask`.
pub fn mask_product(polys: &[Polynomial], mask: SubsetMask) -> Polynomial {
    let mut acc = Polynomial::one();
    for (i, p) in polys.iter().enumerate() {
        if mask >> i & 1 == 1 {
            acc = &acc * p;
        }
    }
    acc
}

/// The product set grows as 2^n; refusing to enumerate past the cap keeps the
/// search space explicit instead of silently exploding.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ProductSetTooLarge {
    pub polys: usize,
    pub cap: usize,
}

impl fmt::Display for ProductSetTooLarge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "product set too large: {} inequalities give 2^{} subset products, cap is {}",
            self.polys, self.polys, self.cap
        )
    }
}

impl core::error::Error for ProductSetTooLarge {}

/// All 2^n subset products of `polys` (empty product = 1 first), in
/// ascending mask order.
pub fn product_closure(
    polys: &[Polynomial],
    max_products: usize,
) -> Result<Vec<(SubsetMask, Polynomial)>, ProductSetTooLarge> {
    let n = polys.len();
    if n >= usize::BITS as usize || (1usize << n) > max_products {
        return Err(ProductSetTooLarge {
            polys: n,
            cap: max_products,
        });
    }
    let count = 1usize << n;
    let mut out: Vec<(SubsetMask, Polynomial)> = Vec::with_capacity(count);
    out.push((0, Polynomial::one()));
    for mask in 1..count as SubsetMask {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let prod = &out[rest as usize].1 * &polys[low];
        out.push((mask, prod));
    }
    Ok(out)
}
