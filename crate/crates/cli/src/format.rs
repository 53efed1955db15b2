//! On-disk formats for pencils and certificates, plus the shared matrix and
//! monomial serialization they build on. Emission is canonical (stable
//! ordering, lowest-terms rationals), so `parse(emit(x)) == x` bit-exactly.

use std::fmt::Write as _;

use psatz_core::linalg::RatMatrix;
use psatz_core::monomial::Monomial;
use psatz_core::poly::SubsetMask;
use psatz_core::rational::Rational;
use psatz_core::reduction::{CertBlock, Certificate, MultiplierMap, Pencil, PencilBlock};

use crate::parse::{parse_polynomial, parse_rational_str, DeclaredNames, ParseError};

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        col: 1,
        message: message.into(),
    }
}

/// `{}`, `{2}`, `{1,3}`: 1-based inequality indices in ascending order.
pub fn mask_to_text(mask: SubsetMask) -> String {
    let mut parts = Vec::new();
    for i in 0..64 {
        if mask >> i & 1 == 1 {
            parts.push((i + 1).to_string());
        }
    }
    format!("{{{}}}", parts.join(","))
}

pub fn mask_from_text(s: &str, line: usize) -> Result<SubsetMask, ParseError> {
    let inner = s
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| err(line, format!("bad mask `{s}`, expected `{{i,j,...}}`")))?;
    let mut mask: SubsetMask = 0;
    if inner.trim().is_empty() {
        return Ok(0);
    }
    for part in inner.split(',') {
        let idx: u32 = part
            .trim()
            .parse()
            .map_err(|_| err(line, format!("bad index `{part}` in mask `{s}`")))?;
        if idx == 0 || idx > 64 {
            return Err(err(line, format!("mask index {idx} out of range")));
        }
        mask |= 1 << (idx - 1);
    }
    Ok(mask)
}

pub fn monomial_to_text(m: &Monomial, names: &[String]) -> String {
    m.display(names).to_string()
}

pub fn monomial_from_text(s: &str, names: &[String], line: usize) -> Result<Monomial, ParseError> {
    if s == "1" {
        return Ok(Monomial::one());
    }
    let mut exps = Vec::new();
    for factor in s.split('*') {
        let (name, exp) = match factor.split_once('^') {
            Some((n, e)) => {
                let e: u32 = e
                    .parse()
                    .map_err(|_| err(line, format!("bad exponent in monomial `{s}`")))?;
                (n, e)
            }
            None => (factor, 1),
        };
        let var = names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| err(line, format!("unknown variable `{name}` in monomial `{s}`")))?;
        exps.push((var, exp));
    }
    Ok(Monomial::from_exps(exps))
}

pub fn rational_to_text(r: &Rational) -> String {
    r.to_string()
}

fn matrix_rows_to_text(out: &mut String, m: &RatMatrix) {
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols())
            .map(|j| rational_to_text(m.get(i, j)))
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
}

fn parse_matrix_rows(
    lines: &[(usize, &str)],
    cursor: &mut usize,
    rows: usize,
    cols: usize,
) -> Result<RatMatrix, ParseError> {
    let mut data = Vec::with_capacity(rows);
    for _ in 0..rows {
        let Some(&(line_no, text)) = lines.get(*cursor) else {
            return Err(err(
                0,
                format!("expected {rows} matrix rows, file ended early"),
            ));
        };
        *cursor += 1;
        let entries: Vec<Rational> = text
            .split_whitespace()
            .map(|w| {
                parse_rational_str(w).ok_or_else(|| err(line_no, format!("bad matrix entry `{w}`")))
            })
            .collect::<Result<_, _>>()?;
        if entries.len() != cols {
            return Err(err(
                line_no,
                format!("expected {cols} entries, found {}", entries.len()),
            ));
        }
        data.push(entries);
    }
    Ok(RatMatrix::from_rows(data))
}

/// Certificate file: a header, the variable table, one Gram block per
/// `block` header with its matrix rows, and one `multiplier` line per
/// equality of the target problem.
pub fn emit_certificate(cert: &Certificate, var_names: &[String]) -> String {
    let mut out = String::from("certificate\n");
    let _ = writeln!(out, "vars {}", var_names.join(" "));
    for block in &cert.blocks {
        let monos: Vec<String> = block
            .monomials
            .iter()
            .map(|m| monomial_to_text(m, var_names))
            .collect();
        let _ = writeln!(
            out,
            "block {} monomials {}",
            mask_to_text(block.mask),
            monos.join(" ")
        );
        matrix_rows_to_text(&mut out, &block.gram);
    }
    for lambda in &cert.multipliers {
        let _ = writeln!(out, "multiplier {}", lambda.display(var_names));
    }
    out.push_str("end\n");
    out
}

pub fn parse_certificate(text: &str) -> Result<(Certificate, Vec<String>), ParseError> {
    let lines = content_lines(text);
    let mut cursor = 0usize;
    expect_keyword(&lines, &mut cursor, "certificate")?;
    let var_names = parse_vars_line(&lines, &mut cursor)?;
    let mut blocks = Vec::new();
    let mut multipliers = Vec::new();
    while let Some(&(line_no, text)) = lines.get(cursor) {
        let mut words = text.split_whitespace();
        match words.next() {
            Some("block") => {
                cursor += 1;
                let mask_word = words
                    .next()
                    .ok_or_else(|| err(line_no, "block header needs a mask"))?;
                let mask = mask_from_text(mask_word, line_no)?;
                if words.next() != Some("monomials") {
                    return Err(err(line_no, "block header needs `monomials <m...>`"));
                }
                let monomials: Vec<Monomial> = words
                    .map(|w| monomial_from_text(w, &var_names, line_no))
                    .collect::<Result<_, _>>()?;
                if monomials.is_empty() {
                    return Err(err(line_no, "block has no monomials"));
                }
                let k = monomials.len();
                let gram = parse_matrix_rows(&lines, &mut cursor, k, k)?;
                blocks.push(CertBlock {
                    mask,
                    monomials,
                    gram,
                });
            }
            Some("multiplier") => {
                cursor += 1;
                let rest = text.trim_start().strip_prefix("multiplier").unwrap().trim();
                let poly = parse_polynomial(line_no, rest, &DeclaredNames(&var_names))?;
                multipliers.push(poly);
            }
            Some("end") => {
                return Ok((
                    Certificate {
                        blocks,
                        multipliers,
                    },
                    var_names,
                ));
            }
            _ => {
                return Err(err(
                    line_no,
                    format!("unexpected line `{text}` in certificate"),
                ))
            }
        }
    }
    Err(err(0, "certificate file missing `end`"))
}

/// Pencil file: parameter and variable tables, optional block and multiplier
/// provenance, then the matrices `f0` and one per parameter.
pub fn emit_pencil(pencil: &Pencil, var_names: &[String]) -> String {
    let mut out = String::from("pencil\n");
    let _ = writeln!(out, "dim {}", pencil.dim());
    let _ = writeln!(out, "params {}", pencil.param_names.join(" "));
    if !var_names.is_empty() {
        let _ = writeln!(out, "vars {}", var_names.join(" "));
    }
    for block in &pencil.blocks {
        let monos: Vec<String> = block
            .monomials
            .iter()
            .map(|m| monomial_to_text(m, var_names))
            .collect();
        let _ = writeln!(
            out,
            "block {} monomials {}",
            mask_to_text(block.mask),
            monos.join(" ")
        );
    }
    let _ = writeln!(out, "matrix f0");
    matrix_rows_to_text(&mut out, &pencil.f0);
    for (name, f) in pencil.param_names.iter().zip(&pencil.basis) {
        let _ = writeln!(out, "matrix {name}");
        matrix_rows_to_text(&mut out, f);
    }
    for (j, mm) in pencil.multipliers.iter().enumerate() {
        let monos: Vec<String> = mm
            .monomials
            .iter()
            .map(|m| monomial_to_text(m, var_names))
            .collect();
        let _ = writeln!(out, "multiplier {j} monomials {}", monos.join(" "));
        let part: Vec<String> = mm.particular.iter().map(rational_to_text).collect();
        let _ = writeln!(out, "multiplier {j} particular {}", part.join(" "));
        for (name, row) in pencil.param_names.iter().zip(&mm.basis) {
            let vals: Vec<String> = row.iter().map(rational_to_text).collect();
            let _ = writeln!(out, "multiplier {j} basis {name} {}", vals.join(" "));
        }
    }
    out.push_str("end\n");
    out
}

pub fn parse_pencil(text: &str) -> Result<(Pencil, Vec<String>), ParseError> {
    let lines = content_lines(text);
    let mut cursor = 0usize;
    expect_keyword(&lines, &mut cursor, "pencil")?;

    let (line_no, dim_line) = *lines
        .get(cursor)
        .ok_or_else(|| err(0, "pencil file ended before `dim`"))?;
    let dim: usize = dim_line
        .strip_prefix("dim")
        .map(str::trim)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| err(line_no, "expected `dim <n>`"))?;
    cursor += 1;

    let (line_no, params_line) = *lines
        .get(cursor)
        .ok_or_else(|| err(0, "pencil file ended before `params`"))?;
    let param_names: Vec<String> = params_line
        .strip_prefix("params")
        .map(|s| s.split_whitespace().map(|w| w.to_string()).collect())
        .ok_or_else(|| err(line_no, "expected `params <name>...`"))?;
    cursor += 1;

    let var_names = if lines
        .get(cursor)
        .map(|&(_, t)| t.starts_with("vars"))
        .unwrap_or(false)
    {
        parse_vars_line(&lines, &mut cursor)?
    } else {
        Vec::new()
    };

    let mut blocks: Vec<PencilBlock> = Vec::new();
    let mut offset = 0usize;
    while let Some(&(line_no, text)) = lines.get(cursor) {
        if !text.starts_with("block") {
            break;
        }
        cursor += 1;
        let mut words = text.split_whitespace();
        words.next();
        let mask_word = words
            .next()
            .ok_or_else(|| err(line_no, "block header needs a mask"))?;
        let mask = mask_from_text(mask_word, line_no)?;
        if words.next() != Some("monomials") {
            return Err(err(line_no, "block header needs `monomials <m...>`"));
        }
        let monomials: Vec<Monomial> = words
            .map(|w| monomial_from_text(w, &var_names, line_no))
            .collect::<Result<_, _>>()?;
        let size = monomials.len();
        blocks.push(PencilBlock {
            mask,
            monomials,
            offset,
            size,
        });
        offset += size;
    }
    if !blocks.is_empty() && offset != dim {
        return Err(err(0, format!("blocks cover {offset} of {dim} dimensions")));
    }

    let mut f0: Option<RatMatrix> = None;
    let mut basis: Vec<RatMatrix> = Vec::new();
    while let Some(&(line_no, text)) = lines.get(cursor) {
        if !text.starts_with("matrix") {
            break;
        }
        cursor += 1;
        let name = text.strip_prefix("matrix").unwrap().trim();
        let m = parse_matrix_rows(&lines, &mut cursor, dim, dim)?;
        if !m.is_symmetric() {
            return Err(err(line_no, format!("matrix {name} is not symmetric")));
        }
        if name == "f0" {
            if f0.is_some() {
                return Err(err(line_no, "duplicate f0 matrix"));
            }
            f0 = Some(m);
        } else {
            let expect = param_names.get(basis.len()).map(String::as_str);
            if expect != Some(name) {
                return Err(err(
                    line_no,
                    format!(
                        "matrix `{name}` out of order (expected `{}`)",
                        expect.unwrap_or("end")
                    ),
                ));
            }
            basis.push(m);
        }
    }
    let f0 = f0.ok_or_else(|| err(0, "pencil file has no f0 matrix"))?;
    if basis.len() != param_names.len() {
        return Err(err(
            0,
            format!(
                "{} basis matrices for {} parameters",
                basis.len(),
                param_names.len()
            ),
        ));
    }

    let mut multipliers: Vec<MultiplierMap> = Vec::new();
    while let Some(&(line_no, text)) = lines.get(cursor) {
        if !text.starts_with("multiplier") {
            break;
        }
        cursor += 1;
        let mut words = text.split_whitespace();
        words.next();
        let j: usize = words
            .next()
            .and_then(|w| w.parse().ok())
            .ok_or_else(|| err(line_no, "multiplier line needs an index"))?;
        let kind = words
            .next()
            .ok_or_else(|| err(line_no, "incomplete multiplier line"))?;
        match kind {
            "monomials" => {
                if j != multipliers.len() {
                    return Err(err(line_no, format!("multiplier {j} out of order")));
                }
                let monomials: Vec<Monomial> = words
                    .map(|w| monomial_from_text(w, &var_names, line_no))
                    .collect::<Result<_, _>>()?;
                multipliers.push(MultiplierMap {
                    monomials,
                    particular: Vec::new(),
                    basis: Vec::new(),
                });
            }
            "particular" | "basis" => {
                let mm = multipliers
                    .get_mut(j)
                    .ok_or_else(|| err(line_no, format!("multiplier {j} has no monomials line")))?;
                let skip = if kind == "basis" { 1 } else { 0 };
                let vals: Vec<Rational> = words
                    .skip(skip)
                    .map(|w| {
                        parse_rational_str(w)
                            .ok_or_else(|| err(line_no, format!("bad coefficient `{w}`")))
                    })
                    .collect::<Result<_, _>>()?;
                if vals.len() != mm.monomials.len() {
                    return Err(err(
                        line_no,
                        format!(
                            "{} coefficients for {} monomials",
                            vals.len(),
                            mm.monomials.len()
                        ),
                    ));
                }
                if kind == "particular" {
                    mm.particular = vals;
                } else {
                    mm.basis.push(vals);
                }
            }
            other => return Err(err(line_no, format!("unknown multiplier field `{other}`"))),
        }
    }
    for (j, mm) in multipliers.iter().enumerate() {
        if mm.particular.len() != mm.monomials.len() {
            return Err(err(0, format!("multiplier {j} missing its particular row")));
        }
        if mm.basis.len() != param_names.len() {
            return Err(err(
                0,
                format!(
                    "multiplier {j} has {} basis rows for {} parameters",
                    mm.basis.len(),
                    param_names.len()
                ),
            ));
        }
    }

    match lines.get(cursor) {
        Some(&(_, "end")) => {}
        Some(&(line_no, other)) => return Err(err(line_no, format!("unexpected line `{other}`"))),
        None => return Err(err(0, "pencil file missing `end`")),
    }

    Ok((
        Pencil {
            f0,
            basis,
            blocks,
            multipliers,
            param_names,
        },
        var_names,
    ))
}

/// Problem emission, the inverse of `parse::parse_problem`.
pub fn emit_problem(prob: &psatz_core::problem::Problem) -> String {
    let mut out = String::new();
    let names = prob.variables();
    let _ = writeln!(out, "vars {}", names.join(" "));
    for p in prob.inequalities() {
        let _ = writeln!(out, "{} >= 0", p.display(names));
    }
    for z in prob.equalities() {
        let _ = writeln!(out, "{} = 0", z.display(names));
    }
    out
}

fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let line = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            };
            let trimmed = line.trim();
            if trimmed.is_empty() {
                None
            } else {
                Some((i + 1, trimmed))
            }
        })
        .collect()
}

fn expect_keyword(
    lines: &[(usize, &str)],
    cursor: &mut usize,
    keyword: &str,
) -> Result<(), ParseError> {
    match lines.get(*cursor) {
        Some(&(_, text)) if text == keyword => {
            *cursor += 1;
            Ok(())
        }
        Some(&(line_no, text)) => Err(err(
            line_no,
            format!("expected `{keyword}`, found `{text}`"),
        )),
        None => Err(err(1, format!("empty file, expected `{keyword}`"))),
    }
}

pub fn parse_vars_line(
    lines: &[(usize, &str)],
    cursor: &mut usize,
) -> Result<Vec<String>, ParseError> {
    let Some(&(line_no, text)) = lines.get(*cursor) else {
        return Err(err(0, "file ended before `vars` line"));
    };
    let names = text
        .strip_prefix("vars")
        .map(|s| {
            s.split_whitespace()
                .map(|w| w.to_string())
                .collect::<Vec<_>>()
        })
        .ok_or_else(|| err(line_no, "expected `vars <name>...`"))?;
    *cursor += 1;
    Ok(names)
}
