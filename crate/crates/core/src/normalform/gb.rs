use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::tensoralg::{Homogeneity, Letter, NcPoly, Rational, Word};

/// A rewriting rule `lead → tail`, where every word of `tail` is smaller than `lead`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lead: Word,
    pub tail: NcPoly,
}

impl Rule {
    /// The monic relation `lead - tail`.
    pub fn relation(&self) -> NcPoly {
        let mut p = -&self.tail;
        p.add_term(self.lead.clone(), Rational::one());
        p
    }
}

/// Gröbner basis of a homogeneous two-sided ideal, complete through degree `bound`.
///
/// The order is degree-lexicographic on letter indices, so the last letter of the
/// alphabet (the Ore variable, when present) is the greatest.
#[derive(Clone, Debug)]
pub struct TruncatedGb {
    nvars: usize,
    bound: usize,
    rules: Vec<Rule>,
    leads: HashMap<Vec<Letter>, usize>,
    lead_lengths: Vec<usize>,
}

impl TruncatedGb {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn relations(&self) -> Vec<NcPoly> {
        self.rules.iter().map(Rule::relation).collect()
    }

    /// First occurrence `(position, rule)` of a leading word inside `w`.
    pub fn find_lead(&self, w: &[Letter]) -> Option<(usize, usize)> {
        for start in 0..w.len() {
            for &len in &self.lead_lengths {
                if start + len > w.len() {
                    break;
                }
                if let Some(&r) = self.leads.get(&w[start..start + len]) {
                    return Some((start, r));
                }
            }
        }
        None
    }

    /// Every `(position, rule)` occurrence of a leading word inside `w`.
    pub fn lead_occurrences(&self, w: &[Letter]) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for start in 0..w.len() {
            for &len in &self.lead_lengths {
                if start + len > w.len() {
                    break;
                }
                if let Some(&r) = self.leads.get(&w[start..start + len]) {
                    out.push((start, r));
                }
            }
        }
        out
    }

    pub fn is_normal_word(&self, w: &Word) -> bool {
        self.find_lead(w.letters()).is_none()
    }

    fn check_poly(&self, p: &NcPoly) -> Result<()> {
        if p.nvars() != self.nvars {
            return Err(Error::AlphabetMismatch { left: self.nvars, right: p.nvars() });
        }
        let d = p.max_degree();
        if !p.is_zero() && d > self.bound {
            return Err(Error::DegreeExceedsBound { degree: d, bound: self.bound });
        }
        Ok(())
    }

    /// Unique irreducible representative of `p` modulo the ideal.
    pub fn normal_form(&self, p: &NcPoly) -> Result<NcPoly> {
        self.check_poly(p)?;
        Ok(self.reduce_unchecked(p))
    }

    fn reduce_unchecked(&self, p: &NcPoly) -> NcPoly {
        let mut work: BTreeMap<Word, Rational> = p.clone().into_terms();
        let mut out = NcPoly::zero(self.nvars);
        // the largest term is final once irreducible, since rewriting only produces smaller words
        while let Some((w, c)) = work.pop_last() {
            match self.find_lead(w.letters()) {
                None => out.add_term(w, c),
                Some((pos, r)) => {
                    let rule = &self.rules[r];
                    let (u, v) = split_around(&w, pos, rule.lead.len());
                    for (t, tc) in rule.tail.terms() {
                        let word = u.concat(t).concat(&v);
                        add_into(&mut work, word, &c * tc);
                    }
                }
            }
        }
        out
    }

    /// Normal form computed by rewriting a random reducible term at a random
    /// occurrence until nothing is reducible. Agrees with [`Self::normal_form`]
    /// exactly when the rewriting system is confluent in the relevant degrees.
    pub fn normal_form_random<R: Rng>(&self, p: &NcPoly, rng: &mut R) -> Result<NcPoly> {
        self.check_poly(p)?;
        let mut work: BTreeMap<Word, Rational> = p.clone().into_terms();
        loop {
            let reducible: Vec<Word> =
                work.keys().filter(|w| self.find_lead(w.letters()).is_some()).cloned().collect();
            if reducible.is_empty() {
                return Ok(NcPoly::from_terms(self.nvars, work));
            }
            let w = &reducible[rng.gen_range(0..reducible.len())];
            let occ = self.lead_occurrences(w.letters());
            let (pos, r) = occ[rng.gen_range(0..occ.len())];
            let c = work.remove(w).expect("present");
            let rule = &self.rules[r];
            let (u, v) = split_around(w, pos, rule.lead.len());
            for (t, tc) in rule.tail.terms() {
                add_into(&mut work, u.concat(t).concat(&v), &c * tc);
            }
        }
    }

    /// Normal words of degree `k`, increasing.
    pub fn normal_words(&self, k: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k);
        self.extend_normal(&mut cur, k, &mut |w| out.push(Word::new(w.to_vec())));
        out
    }

    /// Number of normal words in each degree `0..=bound`.
    pub fn normal_word_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.bound + 1];
        let mut cur = Vec::with_capacity(self.bound);
        self.count_normal(&mut cur, &mut counts);
        counts
    }

    fn suffix_is_lead(&self, w: &[Letter]) -> bool {
        self.lead_lengths.iter().any(|&len| len <= w.len() && self.leads.contains_key(&w[w.len() - len..]))
    }

    fn extend_normal(&self, cur: &mut Vec<Letter>, k: usize, emit: &mut impl FnMut(&[Letter])) {
        if cur.len() == k {
            emit(cur);
            return;
        }
        for a in 0..self.nvars {
            cur.push(a as Letter);
            if !self.suffix_is_lead(cur) {
                self.extend_normal(cur, k, emit);
            }
            cur.pop();
        }
    }

    fn count_normal(&self, cur: &mut Vec<Letter>, counts: &mut [u64]) {
        counts[cur.len()] += 1;
        if cur.len() == self.bound {
            return;
        }
        for a in 0..self.nvars {
            cur.push(a as Letter);
            if !self.suffix_is_lead(cur) {
                self.count_normal(cur, counts);
            }
            cur.pop();
        }
    }

    /// Every overlap ambiguity of total degree at most `bound` resolves to zero.
    pub fn overlaps_resolve(&self) -> bool {
        for a in &self.rules {
            for b in &self.rules {
                for s in overlap_s_polys(a, b, self.bound) {
                    if !self.reduce_unchecked(&s).is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn add_rule(&mut self, rule: Rule) {
        let len = rule.lead.len();
        self.leads.insert(rule.lead.letters().to_vec(), self.rules.len());
        if !self.lead_lengths.contains(&len) {
            self.lead_lengths.push(len);
            self.lead_lengths.sort_unstable();
        }
        self.rules.push(rule);
    }
}

fn split_around(w: &Word, pos: usize, len: usize) -> (Word, Word) {
    (w.subword(0, pos), w.subword(pos + len, w.len()))
}

fn add_into(map: &mut BTreeMap<Word, Rational>, w: Word, c: Rational) {
    if c.is_zero() {
        return;
    }
    match map.entry(w) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// S-polynomials `a·v - u·b` for proper overlaps `lead_a = u·o`, `lead_b = o·v`
/// with total length at most `max_len`.
fn overlap_s_polys(a: &Rule, b: &Rule, max_len: usize) -> Vec<NcPoly> {
    let (la, lb) = (a.lead.letters(), b.lead.letters());
    let mut out = Vec::new();
    for o in 1..la.len().min(lb.len()) {
        if la.len() + lb.len() - o > max_len || la[la.len() - o..] != lb[..o] {
            continue;
        }
        let u = Word::new(la[..la.len() - o].to_vec());
        let v = Word::new(lb[o..].to_vec());
        let nv = a.tail.nvars();
        let uu = NcPoly::monomial(nv, u, Rational::one());
        let vv = NcPoly::monomial(nv, v, Rational::one());
        out.push(&(&a.relation() * &vv) - &(&uu * &b.relation()));
    }
    out
}

/// Completes homogeneous relations to a Gröbner basis through degree `bound`.
///
/// Works one degree at a time: the degree-`d` candidates are the inputs of
/// degree `d` and the S-polynomials of overlaps of total degree `d`, reduced by
/// the rules of lower degree and then brought to reduced echelon form. Since
/// all rules are homogeneous, nothing of degree at most `bound` is missed.
pub fn complete_gb(nvars: usize, relations: &[NcPoly], bound: usize) -> Result<TruncatedGb> {
    let mut by_degree: BTreeMap<usize, Vec<&NcPoly>> = BTreeMap::new();
    for r in relations {
        if r.nvars() != nvars {
            return Err(Error::AlphabetMismatch { left: nvars, right: r.nvars() });
        }
        match r.homogeneity() {
            Homogeneity::Zero => {}
            Homogeneity::Degree(d) => by_degree.entry(d).or_default().push(r),
            Homogeneity::Mixed => return Err(Error::Inhomogeneous),
        }
    }
    if by_degree.contains_key(&0) {
        return Err(Error::Precondition("a nonzero constant generates the whole algebra".into()));
    }
    let mut gb = TruncatedGb { nvars, bound, rules: Vec::new(), leads: HashMap::new(), lead_lengths: Vec::new() };
    for d in 1..=bound {
        let mut candidates: Vec<NcPoly> = by_degree.get(&d).map(|v| v.iter().map(|p| (*p).clone()).collect()).unwrap_or_default();
        for a in &gb.rules {
            for b in &gb.rules {
                for s in overlap_s_polys(a, b, d) {
                    if s.max_degree() == d {
                        candidates.push(s);
                    }
                }
            }
        }
        let reduced: Vec<NcPoly> =
            candidates.iter().map(|p| gb.reduce_unchecked(p)).filter(|p| !p.is_zero()).collect();
        for rule in echelon_rules(&reduced) {
            gb.add_rule(rule);
        }
    }
    Ok(gb)
}

/// Reduced row echelon form of same-degree polynomials, read off as rules.
fn echelon_rules(polys: &[NcPoly]) -> Vec<Rule> {
    let mut rows: Vec<BTreeMap<Word, Rational>> = Vec::new();
    for p in polys {
        let mut row = p.clone().into_terms();
        for pivot in &rows {
            let (lead, _) = pivot.last_key_value().expect("nonzero row");
            if let Some(c) = row.get(lead).cloned() {
                for (w, v) in pivot {
                    add_into(&mut row, w.clone(), -(&c * v));
                }
            }
        }
        let Some((_, lc)) = row.last_key_value() else { continue };
        let inv = Rational::one() / lc;
        for v in row.values_mut() {
            *v *= &inv;
        }
        // clear the new pivot from earlier rows
        let lead = row.last_key_value().expect("nonzero").0.clone();
        for pivot in rows.iter_mut() {
            if let Some(c) = pivot.get(&lead).cloned() {
                for (w, v) in &row {
                    add_into(pivot, w.clone(), -(&c * v));
                }
            }
        }
        rows.push(row);
    }
    rows.into_iter()
        .map(|mut row| {
            let (lead, _) = row.pop_last().expect("nonzero");
            let nv = polys[0].nvars();
            let tail = -&NcPoly::from_terms(nv, row);
            Rule { lead, tail }
        })
        .collect()
}

/// Memoized normal forms of single words, for building many matrices against
/// the same basis.
pub struct NormalFormCache<'a> {
    gb: &'a TruncatedGb,
    memo: HashMap<Word, NcPoly>,
}

impl<'a> NormalFormCache<'a> {
    pub fn new(gb: &'a TruncatedGb) -> Self {
        NormalFormCache { gb, memo: HashMap::new() }
    }

    pub fn gb(&self) -> &TruncatedGb {
        self.gb
    }

    pub fn word(&mut self, w: &Word) -> Result<NcPoly> {
        if w.len() > self.gb.bound {
            return Err(Error::DegreeExceedsBound { degree: w.len(), bound: self.gb.bound });
        }
        Ok(self.word_unchecked(w))
    }

    fn word_unchecked(&mut self, w: &Word) -> NcPoly {
        if let Some(p) = self.memo.get(w) {
            return p.clone();
        }
        let out = match self.gb.find_lead(w.letters()) {
            None => NcPoly::monomial(self.gb.nvars, w.clone(), Rational::one()),
            Some((pos, r)) => {
                let rule = self.gb.rules[r].clone();
                let (u, v) = split_around(w, pos, rule.lead.len());
                let mut acc = NcPoly::zero(self.gb.nvars);
                for (t, c) in rule.tail.terms() {
                    let sub = self.word_unchecked(&u.concat(t).concat(&v));
                    acc.add_scaled(&sub, c);
                }
                acc
            }
        };
        self.memo.insert(w.clone(), out.clone());
        out
    }

    pub fn poly(&mut self, p: &NcPoly) -> Result<NcPoly> {
        self.gb.check_poly(p)?;
        let mut acc = NcPoly::zero(self.gb.nvars);
        for (w, c) in p.terms() {
            let nf = self.word_unchecked(w);
            acc.add_scaled(&nf, c);
        }
        Ok(acc)
    }
}
