//! Text formats consumed by the command line: problem files, polynomial
//! expressions, and slicing relations. Errors carry line/column positions.

use std::fmt;

use psatz_core::monomial::Var;
use psatz_core::poly::Polynomial;
use psatz_core::problem::Problem;
use psatz_core::rational::Rational;
use psatz_core::reduction::AffineRelation;

use num_bigint::BigInt;
use num_traits::Zero;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.line, self.col, self.message
        )
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, PartialEq, Debug)]
enum Tok {
    Number(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

struct Lexer {
    toks: Vec<(Tok, usize)>, // token and its column (1-based)
    pos: usize,
    line: usize,
    end_col: usize,
}

fn lex(line_no: usize, text: &str) -> Result<Lexer, ParseError> {
    let mut toks = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        match c {
            ' ' | '\t' => {
                i += 1;
            }
            '+' => {
                toks.push((Tok::Plus, col));
                i += 1;
            }
            '-' => {
                toks.push((Tok::Minus, col));
                i += 1;
            }
            '*' => {
                toks.push((Tok::Star, col));
                i += 1;
            }
            '^' => {
                toks.push((Tok::Caret, col));
                i += 1;
            }
            '(' => {
                toks.push((Tok::LParen, col));
                i += 1;
            }
            ')' => {
                toks.push((Tok::RParen, col));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let numer: String = chars[start..i].iter().collect();
                let numer: BigInt = numer.parse().unwrap();
                // a '/' directly after digits is part of a rational literal
                if i < chars.len() && chars[i] == '/' {
                    i += 1;
                    let dstart = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    if dstart == i {
                        return Err(ParseError::new(line_no, i + 1, "expected digits after `/`"));
                    }
                    let denom: String = chars[dstart..i].iter().collect();
                    let denom: BigInt = denom.parse().unwrap();
                    if denom.is_zero() {
                        return Err(ParseError::new(line_no, col, "zero denominator"));
                    }
                    toks.push((Tok::Number(Rational::new(numer, denom)), col));
                } else {
                    toks.push((Tok::Number(Rational::from_integer(numer)), col));
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
            }
            '>' | '<' | '=' => {
                return Err(ParseError::new(
                    line_no,
                    col,
                    format!("unexpected `{c}` inside a polynomial expression"),
                ));
            }
            other => {
                return Err(ParseError::new(
                    line_no,
                    col,
                    format!("unexpected character `{other}`"),
                ));
            }
        }
    }
    Ok(Lexer {
        toks,
        pos: 0,
        line: line_no,
        end_col: chars.len() + 1,
    })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|&(_, c)| c)
            .unwrap_or(self.end_col)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.col(), message)
    }
}

/// Resolves identifier names to variable indices during expression parsing.
pub trait NameResolver {
    fn resolve(&self, name: &str) -> Option<Var>;
    fn describe(&self) -> String;
}

pub struct DeclaredNames<'a>(pub &'a [String]);

impl NameResolver for DeclaredNames<'_> {
    fn resolve(&self, name: &str) -> Option<Var> {
        self.0.iter().position(|n| n == name)
    }
    fn describe(&self) -> String {
        format!("declared variables: {}", self.0.join(" "))
    }
}

fn parse_expr(lx: &mut Lexer, names: &dyn NameResolver) -> Result<Polynomial, ParseError> {
    let mut acc = parse_term(lx, names)?;
    loop {
        match lx.peek() {
            Some(Tok::Plus) => {
                lx.next();
                let t = parse_term(lx, names)?;
                acc = &acc + &t;
            }
            Some(Tok::Minus) => {
                lx.next();
                let t = parse_term(lx, names)?;
                acc = &acc - &t;
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_term(lx: &mut Lexer, names: &dyn NameResolver) -> Result<Polynomial, ParseError> {
    let mut acc = parse_factor(lx, names)?;
    loop {
        match lx.peek() {
            Some(Tok::Star) => {
                lx.next();
                let f = parse_factor(lx, names)?;
                acc = &acc * &f;
            }
            // a number or identifier directly after a factor means implicit
            // multiplication, which the format does not allow
            Some(Tok::Number(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                return Err(lx.error("expected an operator here; use `*` for multiplication"));
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_factor(lx: &mut Lexer, names: &dyn NameResolver) -> Result<Polynomial, ParseError> {
    if matches!(lx.peek(), Some(Tok::Minus)) {
        lx.next();
        let f = parse_factor(lx, names)?;
        return Ok(-&f);
    }
    let base = match lx.next() {
        Some(Tok::Number(r)) => Polynomial::constant(r),
        Some(Tok::Ident(name)) => match names.resolve(&name) {
            Some(v) => Polynomial::variable(v),
            None => {
                return Err(ParseError::new(
                    lx.line,
                    lx.toks[lx.pos - 1].1,
                    format!("unknown variable `{name}` ({})", names.describe()),
                ));
            }
        },
        Some(Tok::LParen) => {
            let inner = parse_expr(lx, names)?;
            match lx.next() {
                Some(Tok::RParen) => inner,
                _ => return Err(lx.error("expected `)`")),
            }
        }
        _ => return Err(lx.error("expected a number, variable, or `(`")),
    };
    if matches!(lx.peek(), Some(Tok::Caret)) {
        lx.next();
        let col = lx.col();
        match lx.next() {
            Some(Tok::Number(r)) if r.is_integer() && !num_traits::Signed::is_negative(&r) => {
                let e: u32 = r
                    .numer()
                    .try_into()
                    .map_err(|_| ParseError::new(lx.line, col, "exponent too large"))?;
                return Ok(base.pow(e));
            }
            _ => {
                return Err(ParseError::new(
                    lx.line,
                    col,
                    "exponent must be a nonnegative integer",
                ))
            }
        }
    }
    Ok(base)
}

/// Parse one polynomial expression (a full line or fragment) against a name
/// table.
pub fn parse_polynomial(
    line_no: usize,
    text: &str,
    names: &dyn NameResolver,
) -> Result<Polynomial, ParseError> {
    let mut lx = lex(line_no, text)?;
    let p = parse_expr(&mut lx, names)?;
    if lx.peek().is_some() {
        return Err(lx.error("trailing input after expression"));
    }
    Ok(p)
}

/// Problem text format: a leading `vars a b y` line, then one constraint per
/// line, either `<polynomial> >= 0` or `<polynomial> = 0`. Blank lines and
/// `#` comments are ignored. Strict inequalities are rejected: only wide
/// inequalities have certificates of this form.
pub fn parse_problem(text: &str) -> Result<Problem, ParseError> {
    let mut prob: Option<Problem> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if prob.is_none() {
            let mut words = trimmed.split_whitespace();
            if words.next() != Some("vars") {
                return Err(ParseError::new(
                    line_no,
                    1,
                    "expected a leading `vars <name>...` declaration line",
                ));
            }
            let names: Vec<String> = words.map(|w| w.to_string()).collect();
            for (i, name) in names.iter().enumerate() {
                let mut chars = name.chars();
                let ok_first = chars
                    .next()
                    .map(|c| c.is_ascii_alphabetic() || c == '_')
                    .unwrap_or(false);
                if !ok_first || name.chars().any(|c| !c.is_ascii_alphanumeric() && c != '_') {
                    return Err(ParseError::new(
                        line_no,
                        1,
                        format!("bad variable name `{name}` (position {})", i + 1),
                    ));
                }
            }
            prob =
                Some(Problem::new(names).map_err(|e| ParseError::new(line_no, 1, e.to_string()))?);
            continue;
        }
        let prob_ref = prob.as_mut().unwrap();
        parse_constraint_into(line_no, line, prob_ref)?;
    }
    prob.ok_or_else(|| ParseError::new(1, 1, "empty problem file (no `vars` line)"))
}

fn parse_constraint_into(line_no: usize, line: &str, prob: &mut Problem) -> Result<(), ParseError> {
    let (lhs, rest, is_inequality) = if let Some(p) = line.find(">=") {
        (&line[..p], &line[p + 2..], true)
    } else if let Some(p) = line.find("<=") {
        return Err(ParseError::new(
            line_no,
            p + 1,
            "write `<poly> >= 0` (negate the polynomial instead of using `<=`)",
        ));
    } else if let Some(p) = line.find("==") {
        (&line[..p], &line[p + 2..], false)
    } else if let Some(p) = line.find(['>', '<']) {
        return Err(ParseError::new(
            line_no,
            p + 1,
            "strict inequalities have no certificate of this form; only wide `>= 0` constraints are supported",
        ));
    } else if let Some(p) = line.find('=') {
        (&line[..p], &line[p + 1..], false)
    } else {
        return Err(ParseError::new(
            line_no,
            1,
            "expected `<polynomial> >= 0` or `<polynomial> = 0`",
        ));
    };
    let rest_trim = rest.trim();
    if rest_trim != "0" {
        let col = line.len() - rest.len() + 1;
        return Err(ParseError::new(
            line_no,
            col,
            "right-hand side must be literal `0`",
        ));
    }
    let names: Vec<String> = prob.variables().to_vec();
    let poly = parse_polynomial(line_no, lhs, &DeclaredNames(&names))?;
    let result = if is_inequality {
        prob.push_inequality(poly)
    } else {
        prob.push_equality(poly)
    };
    result.map_err(|e| ParseError::new(line_no, 1, e.to_string()))
}

/// Parse an affine slicing relation such as `-9*a1+a2 = -10` against the
/// pencil's parameter names. The relation must be affine (degree <= 1) with
/// at least one nonzero parameter coefficient.
pub fn parse_relation(text: &str, param_names: &[String]) -> Result<AffineRelation, ParseError> {
    let Some(eq_pos) = text.find('=') else {
        return Err(ParseError::new(1, 1, "slicing relation needs `=`"));
    };
    if text[eq_pos..].starts_with("==")
        || text[..eq_pos].ends_with(['<', '>'])
        || text[eq_pos + 1..].contains('=')
    {
        return Err(ParseError::new(
            1,
            eq_pos + 1,
            "slicing relation must use a single `=`",
        ));
    }
    let names: Vec<String> = param_names.to_vec();
    let resolver = DeclaredNames(&names);
    let lhs = parse_polynomial(1, &text[..eq_pos], &resolver)?;
    let rhs = parse_polynomial(1, &text[eq_pos + 1..], &resolver)?;
    let affine = &lhs - &rhs;
    if affine.degree() > 1 {
        return Err(ParseError::new(
            1,
            1,
            "slicing relation must be affine in the parameters",
        ));
    }
    let mut coeffs = vec![Rational::zero(); param_names.len()];
    let mut constant = Rational::zero();
    for (m, c) in affine.iter_terms() {
        if m.is_one() {
            constant = -c.clone(); // move to the right-hand side
        } else {
            let (v, e) = m.iter().next().unwrap();
            debug_assert!(e == 1);
            coeffs[v] = c.clone();
        }
    }
    if coeffs.iter().all(|c| c.is_zero()) {
        return Err(ParseError::new(
            1,
            1,
            "slicing relation mentions no parameter",
        ));
    }
    Ok(AffineRelation { coeffs, constant })
}

/// Parse a comma-separated list of rationals such as `2, 8, 79` or `-3/11`.
pub fn parse_point(text: &str) -> Result<Vec<Rational>, ParseError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    trimmed
        .split(',')
        .enumerate()
        .map(|(i, part)| {
            parse_rational_str(part.trim())
                .ok_or_else(|| ParseError::new(1, i + 1, format!("bad rational `{}`", part.trim())))
        })
        .collect()
}

/// Parse `p`, `-p`, or `p/q` into a rational.
pub fn parse_rational_str(s: &str) -> Option<Rational> {
    let (numer, denom) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = numer.parse().ok()?;
    let d: BigInt = denom.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}
