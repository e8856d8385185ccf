//! Exact arithmetic in the free algebra T(V) on a finite alphabet of degree-one
//! generators, plus the graded linear algebra the other modules build on.
//!
//! Words are stored as sequences of generator indices and ordered by length
//! first, then lexicographically by index. Polynomials are finite maps from
//! words to exact rationals and never store a zero coefficient.

mod matrix;
mod sparse;

pub use matrix::{graded_matrix, rank_and_solve, RatMatrix, Solution};
pub use sparse::{SparseMatrix, SparseVec};

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact scalar field. Always stored in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Integer as a rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num / den` in lowest terms. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `p`, `-p` or `p/q`. Returns `None` on malformed input or a zero denominator.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Ordered, labelled generators, all of degree one. Optionally one of them is
/// the distinguished Ore variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    names: Vec<String>,
    z_index: Option<usize>,
}

impl GeneratorSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let mut seen = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if seen.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(name.clone()));
            }
        }
        Ok(GeneratorSet { names, z_index: None })
    }

    /// `x1, .., xn`.
    pub fn indexed(prefix: &str, n: usize) -> Self {
        GeneratorSet {
            names: (1..=n).map(|i| format!("{prefix}{i}")).collect(),
            z_index: None,
        }
    }

    /// Appends the Ore variable as the last generator.
    pub fn with_ore_variable(&self, name: &str) -> Result<Self> {
        if self.z_index.is_some() {
            return Err(Error::Precondition("generator set already has an Ore variable".into()));
        }
        let mut names = self.names.clone();
        names.push(name.to_string());
        let mut out = GeneratorSet::new(names)?;
        out.z_index = Some(self.names.len());
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn z_index(&self) -> Option<usize> {
        self.z_index
    }

    /// Generators without the Ore variable.
    pub fn base(&self) -> GeneratorSet {
        match self.z_index {
            None => self.clone(),
            Some(z) => GeneratorSet {
                names: self
                    .names
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != z)
                    .map(|(_, s)| s.clone())
                    .collect(),
                z_index: None,
            },
        }
    }

    /// Renders a word using these labels. Single-character labels are
    /// concatenated, longer ones are joined by `*`.
    pub fn render_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        let compact = self.names.iter().all(|n| n.chars().count() == 1);
        let parts: Vec<&str> = w.letters().iter().map(|&l| self.names[l as usize].as_str()).collect();
        if compact {
            parts.concat()
        } else {
            parts.join("*")
        }
    }
}

/// Generator index inside a word.
pub type Letter = u16;

/// A monomial of T(V). Ordered by length, then lexicographically by index.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn from_indices(letters: &[usize]) -> Self {
        Word(letters.iter().map(|&l| l as Letter).collect())
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: usize) -> Self {
        Word(vec![l as Letter])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn subword(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    pub fn max_letter(&self) -> Option<Letter> {
        self.0.iter().copied().max()
    }

    /// All words of length `len` over `n` letters, in increasing order.
    pub fn all_of_length(n: usize, len: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..len {
            let mut next = Vec::with_capacity(out.len() * n);
            for w in &out {
                for l in 0..n {
                    let mut v = w.0.clone();
                    v.push(l as Letter);
                    next.push(Word(v));
                }
            }
            out = next;
        }
        out
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "w{:?}", self.0)
    }
}

/// Result of a homogeneity query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Homogeneity {
    Zero,
    Degree(usize),
    Mixed,
}

/// An element of T(V): a finite exact-rational combination of words over an
/// alphabet of `nvars` generators.
#[derive(Clone, PartialEq, Eq)]
pub struct NcPoly {
    nvars: usize,
    terms: BTreeMap<Word, Rational>,
}

impl NcPoly {
    pub fn zero(nvars: usize) -> Self {
        NcPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(nvars, Word::empty(), Rational::one())
    }

    pub fn monomial(nvars: usize, w: Word, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(w, c);
        p
    }

    /// The degree-one generator `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(nvars, Word::letter(i), Rational::one())
    }

    /// Builds a polynomial from `(letters, coefficient)` pairs; repeated words add up.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Word, Rational)>,
    {
        let mut p = Self::zero(nvars);
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored (nonzero) terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &Rational)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Word, Rational> {
        self.terms
    }

    pub fn coefficient_of(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds `c * w`, dropping the entry if it cancels.
    pub fn add_term(&mut self, w: Word, c: Rational) {
        debug_assert!(w.max_letter().map_or(true, |l| (l as usize) < self.nvars));
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &NcPoly, c: &Rational) {
        assert_eq!(self.nvars, other.nvars, "alphabet mismatch");
        if c.is_zero() {
            return;
        }
        for (w, d) in &other.terms {
            self.add_term(w.clone(), d * c);
        }
    }

    pub fn scale(&self, c: &Rational) -> NcPoly {
        if c.is_zero() {
            return NcPoly::zero(self.nvars);
        }
        NcPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(w, d)| (w.clone(), d * c)).collect(),
        }
    }

    pub fn homogeneity(&self) -> Homogeneity {
        let mut it = self.terms.keys();
        let first = match it.next() {
            None => return Homogeneity::Zero,
            Some(w) => w.len(),
        };
        // keys are sorted by length, so the last key decides
        let last = self.terms.keys().next_back().map(Word::len).unwrap_or(first);
        if first == last {
            Homogeneity::Degree(first)
        } else {
            Homogeneity::Mixed
        }
    }

    /// Degree of a nonzero homogeneous polynomial.
    pub fn homogeneous_degree(&self) -> Result<Option<usize>> {
        match self.homogeneity() {
            Homogeneity::Zero => Ok(None),
            Homogeneity::Degree(d) => Ok(Some(d)),
            Homogeneity::Mixed => Err(Error::Inhomogeneous),
        }
    }

    /// Largest word length present (0 for the zero polynomial).
    pub fn max_degree(&self) -> usize {
        self.terms.keys().next_back().map(Word::len).unwrap_or(0)
    }

    /// Same polynomial over a larger alphabet (new letters appended at the end).
    pub fn embed(&self, nvars: usize) -> NcPoly {
        assert!(nvars >= self.nvars);
        NcPoly { nvars, terms: self.terms.clone() }
    }

    /// Applies the algebra endomorphism sending generator `i` to `images[i]`.
    pub fn substitute(&self, images: &[NcPoly]) -> Result<NcPoly> {
        if images.len() != self.nvars {
            return Err(Error::AlphabetMismatch { left: self.nvars, right: images.len() });
        }
        let target = images.first().map(NcPoly::nvars).unwrap_or(self.nvars);
        if let Some(bad) = images.iter().find(|p| p.nvars != target) {
            return Err(Error::AlphabetMismatch { left: target, right: bad.nvars });
        }
        let mut out = NcPoly::zero(target);
        for (w, c) in &self.terms {
            let mut acc = NcPoly::one(target).scale(c);
            for &l in w.letters() {
                acc = &acc * &images[l as usize];
            }
            out = &out + &acc;
        }
        Ok(out)
    }

    /// Coefficient vector of a homogeneous polynomial in the basis of all words
    /// of length `degree` (index = base-`nvars` reading of the word).
    pub fn dense_coefficients(&self, degree: usize) -> Result<Vec<Rational>> {
        let size = self.nvars.pow(degree as u32);
        let mut v = vec![Rational::zero(); size];
        for (w, c) in &self.terms {
            if w.len() != degree {
                return Err(Error::WrongDegree { expected: degree, found: w.len() });
            }
            v[word_index(w, self.nvars)] = c.clone();
        }
        Ok(v)
    }

    /// Human-readable rendering, terms in word order.
    pub fn render(&self, gens: &GeneratorSet) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let neg = c < &Rational::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let word = gens.render_word(w);
            if abs.is_one() {
                s.push_str(&word);
            } else if w.is_empty() {
                s.push_str(&abs.to_string());
            } else {
                s.push_str(&format!("{abs}*{word}"));
            }
        }
        s
    }
}

/// Position of `w` among words of its length (base-`n` digits, most significant first).
pub fn word_index(w: &Word, n: usize) -> usize {
    w.letters().iter().fold(0usize, |acc, &l| acc * n + l as usize)
}

impl fmt::Debug for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens = GeneratorSet::indexed("x", self.nvars);
        write!(f, "NcPoly[{}]({})", self.nvars, self.render(&gens))
    }
}

/// Product in T(V): bilinear extension of word concatenation.
pub fn nc_mul(p: &NcPoly, q: &NcPoly) -> Result<NcPoly> {
    if p.nvars != q.nvars {
        return Err(Error::AlphabetMismatch { left: p.nvars, right: q.nvars });
    }
    let mut out = NcPoly::zero(p.nvars);
    for (u, a) in &p.terms {
        for (v, b) in &q.terms {
            out.add_term(u.concat(v), a * b);
        }
    }
    Ok(out)
}

/// Contraction of the leading tensor slot with the dual basis vector `alpha`:
/// keeps words starting with generator `alpha` and strips that letter.
pub fn apply_left_functional(alpha: usize, p: &NcPoly) -> Result<NcPoly> {
    check_functional_input(alpha, p)?;
    let mut out = NcPoly::zero(p.nvars);
    for (w, c) in &p.terms {
        if w.letters()[0] as usize == alpha {
            out.add_term(w.subword(1, w.len()), c.clone());
        }
    }
    Ok(out)
}

/// Contraction of the trailing tensor slot with the dual basis vector `alpha`.
pub fn apply_right_functional(p: &NcPoly, alpha: usize) -> Result<NcPoly> {
    check_functional_input(alpha, p)?;
    let mut out = NcPoly::zero(p.nvars);
    for (w, c) in &p.terms {
        if w.letters()[w.len() - 1] as usize == alpha {
            out.add_term(w.subword(0, w.len() - 1), c.clone());
        }
    }
    Ok(out)
}

fn check_functional_input(alpha: usize, p: &NcPoly) -> Result<()> {
    if alpha >= p.nvars {
        return Err(Error::IndexOutOfRange { index: alpha, n: p.nvars });
    }
    match p.homogeneity() {
        Homogeneity::Mixed => Err(Error::Inhomogeneous),
        Homogeneity::Degree(0) => Err(Error::WrongDegree { expected: 1, found: 0 }),
        _ => Ok(()),
    }
}

impl<'a> Mul<&'a NcPoly> for &'a NcPoly {
    type Output = NcPoly;

    /// Panics on an alphabet mismatch; use [`nc_mul`] for the fallible form.
    fn mul(self, rhs: &'a NcPoly) -> NcPoly {
        nc_mul(self, rhs).expect("alphabet mismatch in NcPoly product")
    }
}

impl<'a> Add<&'a NcPoly> for &'a NcPoly {
    type Output = NcPoly;

    fn add(self, rhs: &'a NcPoly) -> NcPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::one());
        out
    }
}

impl<'a> Sub<&'a NcPoly> for &'a NcPoly {
    type Output = NcPoly;

    fn sub(self, rhs: &'a NcPoly) -> NcPoly {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rational::one());
        out
    }
}

impl Neg for &NcPoly {
    type Output = NcPoly;

    fn neg(self) -> NcPoly {
        self.scale(&-Rational::one())
    }
}

/// Parses a polynomial written with the given generator labels, e.g.
/// `"yxz + 2*x*y - 1/2*zz"`. Used by fixtures and tests; labels are
/// tokenised greedily (longest label first).
pub fn parse_poly(gens: &GeneratorSet, text: &str) -> Option<NcPoly> {
    let n = gens.len();
    let mut labels: Vec<(usize, &str)> = gens.names().iter().map(String::as_str).enumerate().collect();
    labels.sort_by_key(|(_, s)| std::cmp::Reverse(s.len()));
    let mut out = NcPoly::zero(n);
    let cleaned: String = text.replace('\u{2212}', "-").chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned == "0" {
        return Some(out);
    }
    let mut chunks: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for ch in cleaned.chars() {
        if (ch == '+' || ch == '-') && !cur.is_empty() {
            chunks.push((neg, std::mem::take(&mut cur)));
            neg = ch == '-';
        } else if ch == '+' || ch == '-' {
            neg ^= ch == '-';
        } else {
            cur.push(ch);
        }
    }
    if cur.is_empty() {
        return None;
    }
    chunks.push((neg, cur));
    for (neg, chunk) in chunks {
        let (coef, mut rest) = match chunk.split_once('*') {
            Some((c, r)) if c.chars().next().is_some_and(|ch| ch.is_ascii_digit()) => {
                (parse_rational(c)?, r.to_string())
            }
            _ => (Rational::one(), chunk.clone()),
        };
        rest.retain(|c| c != '*');
        let mut letters = Vec::new();
        let mut s = rest.as_str();
        while !s.is_empty() {
            let (idx, label) = labels.iter().find(|(_, l)| s.starts_with(l))?;
            let after = &s[label.len()..];
            // optional exponent written as ^k
            if let Some(exp) = after.strip_prefix('^') {
                let digits: String = exp.chars().take_while(char::is_ascii_digit).collect();
                let k: usize = digits.parse().ok()?;
                letters.extend(std::iter::repeat(*idx as Letter).take(k));
                s = &exp[digits.len()..];
            } else {
                letters.push(*idx as Letter);
                s = after;
            }
        }
        let c = if neg { -coef } else { coef };
        out.add_term(Word::new(letters), c);
    }
    Some(out)
}
