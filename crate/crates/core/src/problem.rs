//! Constraint systems: conjunctions of wide inequalities and equalities.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::poly::Polynomial;

/// A conjunction of `P_i >= 0` (inequalities) and `Z_j = 0` (equalities) over
/// a declared, ordered variable list. Variable indices in the polynomials
/// refer to positions in `variables`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Problem {
    variables: Vec<String>,
    inequalities: Vec<Polynomial>,
    equalities: Vec<Polynomial>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ProblemError {
    DuplicateVariable(String),
    /// A polynomial mentions a variable index outside the declared list.
    UndeclaredVariable {
        index: usize,
        declared: usize,
    },
}

impl fmt::Display for ProblemError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemError::DuplicateVariable(name) => write!(f, "variable `{name}` declared twice"),
            ProblemError::UndeclaredVariable { index, declared } => write!(
                f,
                "polynomial uses variable #{index} but only {declared} variables are declared"
            ),
        }
    }
}

impl core::error::Error for ProblemError {}

impl Problem {
    pub fn new(variables: Vec<String>) -> Result<Self, ProblemError> {
        for (i, name) in variables.iter().enumerate() {
            if variables[..i].contains(name) {
                return Err(ProblemError::DuplicateVariable(name.clone()));
            }
        }
        Ok(Problem {
            variables,
            inequalities: Vec::new(),
            equalities: Vec::new(),
        })
    }

    fn check(&self, p: &Polynomial) -> Result<(), ProblemError> {
        if let Some(v) = p.max_var() {
            if v >= self.variables.len() {
                return Err(ProblemError::UndeclaredVariable {
                    index: v,
                    declared: self.variables.len(),
                });
            }
        }
        Ok(())
    }

    /// Add `p >= 0`.
    pub fn push_inequality(&mut self, p: Polynomial) -> Result<(), ProblemError> {
        self.check(&p)?;
        self.inequalities.push(p);
        Ok(())
    }

    /// Add `p = 0`.
    pub fn push_equality(&mut self, p: Polynomial) -> Result<(), ProblemError> {
        self.check(&p)?;
        self.equalities.push(p);
        Ok(())
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn inequalities(&self) -> &[Polynomial] {
        &self.inequalities
    }

    pub fn equalities(&self) -> &[Polynomial] {
        &self.equalities
    }

    /// Rewrite every inequality `P_i >= 0` as the equality `P_i - mu_i^2 = 0`
    /// with a fresh slack variable `mu_i`, leaving original equalities in
    /// place. Slack names are `mu1`, `mu2`, ... with underscores appended on
    /// collision with declared names, so the construction is deterministic
    /// and round-trips through the text format.
    pub fn equalities_to_slack_form(&self) -> Problem {
        let mut variables = self.variables.clone();
        let mut equalities = self.equalities.clone();
        for (i, p) in self.inequalities.iter().enumerate() {
            let mut name = format!("mu{}", i + 1);
            while variables.contains(&name) {
                name.push('_');
            }
            let slack = variables.len();
            variables.push(name);
            let mu_sq = Polynomial::variable(slack).pow(2);
            equalities.push(p - &mu_sq);
        }
        Problem {
            variables,
            inequalities: Vec::new(),
            equalities,
        }
    }
}
