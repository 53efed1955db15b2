//! Monomials as sparse exponent vectors with a graded-lexicographic order.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

/// Variable identifier: an index into a problem's declared variable list.
pub type Var = usize;

/// A power product of variables. Zero exponents are never stored, so equal
/// monomials have identical representations and the constant monomial is the
/// empty list.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    exps: Vec<(Var, u32)>,
}

impl Monomial {
    /// The constant monomial 1.
    pub fn one() -> Self {
        Monomial { exps: Vec::new() }
    }

    /// A single variable to the first power.
    pub fn var(v: Var) -> Self {
        Monomial {
            exps: alloc::vec![(v, 1)],
        }
    }

    /// Build from (variable, exponent) pairs; zero exponents are dropped and
    /// repeated variables accumulate.
    pub fn from_exps<I: IntoIterator<Item = (Var, u32)>>(pairs: I) -> Self {
        let mut exps: Vec<(Var, u32)> = Vec::new();
        for (v, e) in pairs {
            if e == 0 {
                continue;
            }
            match exps.binary_search_by_key(&v, |&(w, _)| w) {
                Ok(i) => exps[i].1 += e,
                Err(i) => exps.insert(i, (v, e)),
            }
        }
        Monomial { exps }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.exps
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.exps[i].1)
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|&(_, e)| e).sum()
    }

    /// Iterate (variable, exponent) pairs in ascending variable order.
    pub fn iter(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        self.exps.iter().copied()
    }

    /// Largest variable index mentioned, if any.
    pub fn max_var(&self) -> Option<Var> {
        self.exps.last().map(|&(v, _)| v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::from_exps(self.iter().chain(other.iter()))
    }

    pub fn pow(&self, k: u32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial {
            exps: self.exps.iter().map(|&(v, e)| (v, e * k)).collect(),
        }
    }

    /// Render with the given variable names, e.g. `a^2*b`.
    pub fn display<'a>(&'a self, names: &'a [String]) -> MonomialDisplay<'a> {
        MonomialDisplay { m: self, names }
    }
}

/// Graded lexicographic: compare total degree first, then exponents variable
/// by variable in declared order (an earlier variable with a larger exponent
/// wins). This makes `a^2 > a*b > b^2 > a > b > 1` for declared order `a, b`.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let mut i = 0;
        let mut j = 0;
        loop {
            match (self.exps.get(i), other.exps.get(j)) {
                (None, None) => return Ordering::Equal,
                // exhausted side has exponent 0 on the other side's next
                // variable, so the side with entries left is greater
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(&(va, ea)), Some(&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => return Ordering::Greater, // self has the earlier var
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match ea.cmp(&eb) {
                        Ordering::Equal => {
                            i += 1;
                            j += 1;
                        }
                        ord => return ord,
                    },
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub struct MonomialDisplay<'a> {
    m: &'a Monomial,
    names: &'a [String],
}

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, e) in self.m.iter() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            match self.names.get(v) {
                Some(name) => write!(f, "{name}")?,
                None => write!(f, "x{v}")?,
            }
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// All monomials over variables `0..num_vars` of total degree at most
/// `max_degree`, in ascending graded-lex order.
pub fn monomials_up_to_degree(num_vars: usize, max_degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut exps = alloc::vec![0u32; num_vars];
    fn rec(out: &mut Vec<Monomial>, exps: &mut Vec<u32>, var: usize, left: u32, target: u32) {
        if var == exps.len() {
            if left == 0 {
                out.push(Monomial::from_exps(
                    exps.iter().enumerate().map(|(v, &e)| (v, e)),
                ));
            }
            return;
        }
        // larger exponent on an earlier variable first gives descending lex
        // within a degree; we collect descending and reverse per degree below.
        for e in (0..=left).rev() {
            exps[var] = e;
            rec(out, exps, var + 1, left - e, target);
            exps[var] = 0;
        }
    }
    for d in 0..=max_degree {
        let start = out.len();
        rec(&mut out, &mut exps, 0, d, d);
        out[start..].reverse(); // ascending within the degree class
        if num_vars == 0 && d > 0 {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn names() -> Vec<String> {
        vec!["a".to_string(), "b".to_string()]
    }

    #[test]
    fn grlex_order_matches_display_convention() {
        let a2 = Monomial::from_exps([(0, 2)]);
        let ab = Monomial::from_exps([(0, 1), (1, 1)]);
        let b2 = Monomial::from_exps([(1, 2)]);
        let a = Monomial::var(0);
        let b = Monomial::var(1);
        let one = Monomial::one();
        let mut v = vec![
            b.clone(),
            a2.clone(),
            one.clone(),
            ab.clone(),
            a.clone(),
            b2.clone(),
        ];
        v.sort();
        assert_eq!(v, vec![one, b, a, b2, ab, a2]);
    }

    #[test]
    fn no_zero_exponents_stored() {
        let m = Monomial::from_exps([(0, 0), (1, 2), (3, 0)]);
        assert_eq!(m.iter().count(), 1);
        assert_eq!(m.exponent(1), 2);
        assert_eq!(m.exponent(0), 0);
        assert_eq!(m.total_degree(), 2);
    }

    #[test]
    fn display_forms() {
        let n = names();
        assert_eq!(Monomial::one().display(&n).to_string(), "1");
        assert_eq!(
            Monomial::from_exps([(0, 2), (1, 1)])
                .display(&n)
                .to_string(),
            "a^2*b"
        );
    }

    #[test]
    fn enumeration_is_graded_lex_ascending() {
        let ms = monomials_up_to_degree(2, 2);
        let shown: Vec<_> = ms.iter().map(|m| m.display(&names()).to_string()).collect();
        assert_eq!(shown, vec!["1", "b", "a", "b^2", "a*b", "a^2"]);
        assert_eq!(monomials_up_to_degree(0, 4), vec![Monomial::one()]);
    }
}
