//! The `.cy3` presentation format.
//!
//! ```text
//! # comment
//! GENERATORS
//! x y
//! MATRIX
//! 0 1
//! -1 0
//! DERIVATION
//! # i s t value: coefficient of x_s x_t in δ(x_i), indices from 1
//! 1 1 1 b
//! 2 1 2 -b
//! OPTIONS
//! N=6 b=1
//! ```
//!
//! Values are rationals (`p/q`) or parameter terms (`name`, `-name`, `p/q*name`)
//! bound in `OPTIONS` or on the command line. `N` sets the degree bound and `z`
//! names the Ore variable.

use std::collections::BTreeMap;

use cy3_core::derivation::DerivationSpec;
use cy3_core::quadratic::{relation_from_matrix, AntiSymMatrix, QuadraticPresentation};
use cy3_core::tensoralg::{parse_rational, GeneratorSet, RatMatrix, Rational};
use num_traits::One;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InputError {
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("{rule}: {detail}")]
    Invalid { rule: &'static str, detail: String },
}

fn parse_err(line: usize, col: usize, msg: impl Into<String>) -> InputError {
    InputError::Parse { line, col, msg: msg.into() }
}

fn invalid(rule: &'static str, detail: impl Into<String>) -> InputError {
    InputError::Invalid { rule, detail: detail.into() }
}

/// A derivation coefficient, possibly depending on a named parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Literal(Rational),
    Param { coeff: Rational, name: String },
}

impl Value {
    fn parse(token: &str) -> Option<Value> {
        if let Some(r) = parse_rational(token) {
            return Some(Value::Literal(r));
        }
        let (sign, rest) = match token.strip_prefix('-') {
            Some(r) => (-Rational::one(), r),
            None => (Rational::one(), token.strip_prefix('+').unwrap_or(token)),
        };
        let (coeff, name) = match rest.split_once('*') {
            Some((c, n)) => (parse_rational(c)?, n),
            None => (Rational::one(), rest),
        };
        let mut chars = name.chars();
        let first = chars.next()?;
        if !(first.is_ascii_alphabetic() || first == '_') || !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return None;
        }
        Some(Value::Param { coeff: sign * coeff, name: name.to_string() })
    }

    fn evaluate(&self, params: &BTreeMap<String, Rational>) -> Option<Rational> {
        match self {
            Value::Literal(r) => Some(r.clone()),
            Value::Param { coeff, name } => params.get(name).map(|v| coeff * v),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationEntry {
    pub i: usize,
    pub s: usize,
    pub t: usize,
    pub value: Value,
    pub line: usize,
}

/// A parsed, structurally validated presentation file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationFile {
    pub generators: Vec<String>,
    pub matrix: RatMatrix,
    /// 1-based `(i, s, t)` entries of the coefficient cube.
    pub derivation: Vec<DerivationEntry>,
    pub bound: Option<usize>,
    pub params: BTreeMap<String, Rational>,
    pub ore_variable: String,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Generators,
    Matrix,
    Derivation,
    Options,
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter().map(|(s, t)| (line[..s].chars().count() + 1, t)).collect()
}

pub fn parse_presentation(text: &str) -> Result<PresentationFile, InputError> {
    let mut section = None;
    let mut seen = Vec::new();
    let mut generators: Vec<(usize, usize, String)> = Vec::new();
    let mut rows: Vec<(usize, Vec<Rational>)> = Vec::new();
    let mut derivation = Vec::new();
    let mut bound = None;
    let mut params = BTreeMap::new();
    let mut ore_variable = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        let Some(&(col, first)) = toks.first() else { continue };
        let header = match first {
            "GENERATORS" => Some(Section::Generators),
            "MATRIX" => Some(Section::Matrix),
            "DERIVATION" => Some(Section::Derivation),
            "OPTIONS" => Some(Section::Options),
            _ => None,
        };
        if let Some(h) = header {
            if toks.len() > 1 {
                return Err(parse_err(line, toks[1].0, "unexpected text after section header"));
            }
            if seen.contains(&h) {
                return Err(parse_err(line, col, format!("repeated section {first}")));
            }
            seen.push(h);
            section = Some(h);
            continue;
        }
        match section {
            None => return Err(parse_err(line, col, "expected a section header (GENERATORS, MATRIX, DERIVATION or OPTIONS)")),
            Some(Section::Generators) => {
                for (c, tok) in toks {
                    let mut offset = 0;
                    for name in tok.split(',') {
                        if !name.is_empty() {
                            generators.push((line, c + offset, name.to_string()));
                        }
                        offset += name.chars().count() + 1;
                    }
                }
            }
            Some(Section::Matrix) => {
                let mut row = Vec::new();
                for (c, tok) in toks {
                    row.push(parse_rational(tok).ok_or_else(|| parse_err(line, c, format!("expected a rational, found `{tok}`")))?);
                }
                rows.push((line, row));
            }
            Some(Section::Derivation) => {
                if toks.len() != 4 {
                    return Err(parse_err(line, col, format!("expected `i s t value`, found {} field(s)", toks.len())));
                }
                let mut idx3 = [0usize; 3];
                for (k, (c, tok)) in toks[..3].iter().enumerate() {
                    idx3[k] = tok
                        .parse::<usize>()
                        .ok()
                        .filter(|&v| v >= 1)
                        .ok_or_else(|| parse_err(line, *c, format!("expected a generator index from 1, found `{tok}`")))?;
                }
                let (vc, vtok) = toks[3];
                let value = Value::parse(vtok).ok_or_else(|| parse_err(line, vc, format!("expected a rational or parameter, found `{vtok}`")))?;
                derivation.push(DerivationEntry { i: idx3[0], s: idx3[1], t: idx3[2], value, line });
            }
            Some(Section::Options) => {
                for (c, tok) in toks {
                    let (key, value) = tok.split_once('=').ok_or_else(|| parse_err(line, c, format!("expected key=value, found `{tok}`")))?;
                    let vcol = c + key.chars().count() + 1;
                    match key {
                        "N" => {
                            let n = value.parse::<usize>().ok().filter(|&v| v >= 1);
                            bound = Some(n.ok_or_else(|| parse_err(line, vcol, format!("N must be a positive integer, found `{value}`")))?);
                        }
                        "z" => {
                            if value.is_empty() {
                                return Err(parse_err(line, vcol, "empty Ore variable name"));
                            }
                            ore_variable = Some(value.to_string());
                        }
                        _ => {
                            if key.is_empty() {
                                return Err(parse_err(line, c, "empty parameter name"));
                            }
                            let v = parse_rational(value).ok_or_else(|| parse_err(line, vcol, format!("expected a rational, found `{value}`")))?;
                            params.insert(key.to_string(), v);
                        }
                    }
                }
            }
        }
    }

    if generators.is_empty() {
        return Err(invalid("generators", "no GENERATORS given"));
    }
    let n = generators.len();
    for (a, (_, _, name)) in generators.iter().enumerate() {
        if let Some((l, c, _)) = generators[..a].iter().find(|(_, _, m)| m == name) {
            return Err(parse_err(generators[a].0, generators[a].1, format!("duplicate generator `{name}` (first at line {l}, column {c})")));
        }
    }
    if rows.len() != n {
        return Err(invalid("matrix shape", format!("{} generator(s) but {} matrix row(s)", n, rows.len())));
    }
    for (line, row) in &rows {
        if row.len() != n {
            return Err(parse_err(*line, 1, format!("matrix row has {} entries, expected {n}", row.len())));
        }
    }
    let matrix = RatMatrix::from_rows(rows.into_iter().map(|(_, r)| r).collect()).expect("rectangular");
    for i in 0..n {
        for j in i..n {
            if *matrix.get(i, j) != -matrix.get(j, i).clone() {
                return Err(invalid(
                    "anti-symmetry",
                    format!("m[{}][{}] = {} but m[{}][{}] = {}", i + 1, j + 1, matrix.get(i, j), j + 1, i + 1, matrix.get(j, i)),
                ));
            }
        }
    }
    for e in &derivation {
        for v in [e.i, e.s, e.t] {
            if v > n {
                return Err(invalid("derivation index", format!("line {}: index {v} exceeds the {n} generator(s)", e.line)));
            }
        }
    }
    let ore_variable = ore_variable.unwrap_or_else(|| "z".to_string());
    if generators.iter().any(|(_, _, g)| *g == ore_variable) {
        return Err(invalid("Ore variable", format!("`{ore_variable}` is already a generator; set another name with z=")));
    }
    Ok(PresentationFile {
        generators: generators.into_iter().map(|(_, _, g)| g).collect(),
        matrix,
        derivation,
        bound,
        params,
        ore_variable,
    })
}

/// Concrete data after binding parameters.
#[derive(Clone, Debug)]
pub struct Instance {
    pub presentation: QuadraticPresentation,
    pub derivation: DerivationSpec,
}

impl PresentationFile {
    pub fn n(&self) -> usize {
        self.generators.len()
    }

    /// Binds parameters (`overrides` win over `OPTIONS`) and builds the presentation.
    pub fn instantiate(&self, overrides: &BTreeMap<String, Rational>) -> Result<Instance, InputError> {
        let mut params = self.params.clone();
        params.extend(overrides.iter().map(|(k, v)| (k.clone(), v.clone())));
        let n = self.n();
        let gens = GeneratorSet::new(self.generators.iter().cloned()).map_err(|e| invalid("generators", e.to_string()))?;
        let m = AntiSymMatrix::new(self.matrix.clone()).map_err(|e| invalid("anti-symmetry", e.to_string()))?;
        let presentation = relation_from_matrix(&m, &gens).map_err(|e| invalid("matrix", e.to_string()))?;
        let mut d = DerivationSpec::zero(n);
        for e in &self.derivation {
            let v = e.value.evaluate(&params).ok_or_else(|| match &e.value {
                Value::Param { name, .. } => invalid("unbound parameter", format!("line {}: `{name}` has no value", e.line)),
                Value::Literal(_) => unreachable!(),
            })?;
            let acc = d.coeff(e.i - 1, e.s - 1, e.t - 1) + &v;
            d.set(e.i - 1, e.s - 1, e.t - 1, acc);
        }
        Ok(Instance { presentation, derivation: d })
    }
}
