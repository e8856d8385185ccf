use std::collections::HashMap;

use num_traits::One;

use crate::derivation::DerivationSpec;
use crate::error::{Error, Result};
use crate::normalform::{NormalFormCache, TruncatedGb};
use crate::quadratic::QuadraticPresentation;
use crate::superpotential::OrePresentation;
use crate::tensoralg::{NcPoly, Rational, SparseMatrix, SparseVec, Word};

/// Normal-word bases of the graded pieces of an algebra, through the GB bound.
struct Bases {
    words: Vec<Vec<Word>>,
    index: Vec<HashMap<Word, usize>>,
}

impl Bases {
    fn new(gb: &TruncatedGb, bound: usize) -> Self {
        let words: Vec<Vec<Word>> = (0..=bound).map(|k| gb.normal_words(k)).collect();
        let index = words.iter().map(|ws| ws.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect()).collect();
        Bases { words, index }
    }

    fn dim(&self, k: isize) -> usize {
        if k < 0 {
            0
        } else {
            self.words.get(k as usize).map_or(0, Vec::len)
        }
    }

    fn words(&self, k: isize) -> &[Word] {
        if k < 0 {
            &[]
        } else {
            &self.words[k as usize]
        }
    }

    /// Dimension of the degree-`k` part of the free module with generators in `degrees`.
    fn module_dim(&self, degrees: &[usize], k: usize) -> usize {
        degrees.iter().map(|&g| self.dim(k as isize - g as isize)).sum()
    }

    /// Coordinates of a module element given as one normal-form coefficient per generator.
    fn flatten(&self, degrees: &[usize], k: usize, coords: &[NcPoly]) -> SparseVec {
        let mut entries = Vec::new();
        let mut offset = 0;
        for (g, &gd) in degrees.iter().enumerate() {
            let deg = k as isize - gd as isize;
            if deg >= 0 {
                for (w, c) in coords[g].terms() {
                    let i = self.index[deg as usize][w];
                    entries.push((offset + i, c.clone()));
                }
            }
            offset += self.dim(deg);
        }
        SparseVec::from_entries(entries)
    }
}

/// Builds the degree-`k` matrix of a map of free modules from the images of
/// `b ⊗ g` for normal words `b` and source generators `g`.
fn build_map(
    bases: &Bases,
    src: &[usize],
    tgt: &[usize],
    k: usize,
    mut image: impl FnMut(&Word, usize) -> Result<Vec<NcPoly>>,
) -> Result<SparseMatrix> {
    let mut cols = Vec::new();
    for (g, &gd) in src.iter().enumerate() {
        for b in bases.words(k as isize - gd as isize) {
            cols.push(bases.flatten(tgt, k, &image(b, g)?));
        }
    }
    Ok(SparseMatrix::new(bases.module_dim(tgt, k), cols))
}

/// `nf(b · p)`.
fn left_mul(cache: &mut NormalFormCache<'_>, b: &Word, p: &NcPoly) -> Result<NcPoly> {
    let nv = cache.gb().nvars();
    let mut acc = NcPoly::zero(nv);
    for (w, c) in p.terms() {
        acc.add_scaled(&cache.word(&b.concat(w))?, c);
    }
    Ok(acc)
}

fn word_poly(nv: usize, letters: &[usize]) -> NcPoly {
    NcPoly::monomial(nv, Word::from_indices(letters), Rational::one())
}

/// `u_j = Σ_i m_ij x_i`, so that `r = Σ_j u_j x_j`.
fn left_factors(pres: &QuadraticPresentation, nv: usize) -> Vec<NcPoly> {
    let n = pres.n();
    (0..n)
        .map(|j| {
            let mut u = NcPoly::zero(nv);
            for i in 0..n {
                u.add_term(Word::letter(i), pres.matrix.get(i, j).clone());
            }
            u
        })
        .collect()
}

/// `y_{it} = Σ_s k^i_{st} x_s`, so that `δ(x_i) = Σ_t y_{it} x_t`.
fn derivation_factors(d: &DerivationSpec, nv: usize) -> Vec<Vec<NcPoly>> {
    let n = d.n();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|t| {
                    let mut y = NcPoly::zero(nv);
                    for s in 0..n {
                        y.add_term(Word::letter(s), d.coeff(i, s, t).clone());
                    }
                    y
                })
                .collect()
        })
        .collect()
}

/// Ranks and dimensions of an augmented complex in one internal degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeCheck {
    pub degree: usize,
    /// `dim P_0, dim P_1, ..` in this degree.
    pub dims: Vec<usize>,
    /// `rank ∂_1, rank ∂_2, ..` in this degree.
    pub ranks: Vec<usize>,
    /// Dimension of the cokernel the complex is expected to resolve in this degree.
    pub target_dim: usize,
    pub composites_zero: bool,
    pub exact: bool,
}

/// Per-degree exactness of one complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessReport {
    pub degrees: Vec<DegreeCheck>,
}

impl ExactnessReport {
    pub fn holds(&self) -> bool {
        self.degrees.iter().all(|d| d.composites_zero && d.exact)
    }

    /// `Σ_p (-1)^p dim P_p` in each degree.
    pub fn euler_characteristics(&self) -> Vec<i64> {
        self.degrees
            .iter()
            .map(|d| d.dims.iter().enumerate().map(|(p, &x)| if p % 2 == 0 { x as i64 } else { -(x as i64) }).sum())
            .collect()
    }
}

/// Exactness of `0 → P_m → .. → P_0 → C → 0` in degree `k` by rank-nullity,
/// where `maps[p]` is `P_{p+1} → P_p` and `C` has dimension `target_dim`.
fn assess(degree: usize, dims: Vec<usize>, maps: &[SparseMatrix], target_dim: usize) -> DegreeCheck {
    let ranks: Vec<usize> = maps.iter().map(SparseMatrix::rank).collect();
    let composites_zero = maps.windows(2).all(|w| w[0].mul(&w[1]).is_some_and(|c| c.is_zero()));
    let mut exact = ranks[0] + target_dim == dims[0];
    for p in 1..dims.len() {
        let incoming = ranks.get(p).copied().unwrap_or(0);
        exact &= incoming + ranks[p - 1] == dims[p];
    }
    DegreeCheck { degree, dims, ranks, target_dim, composites_zero, exact }
}

fn check_bound(gb: &TruncatedGb, bound: usize) -> Result<()> {
    if bound > gb.bound() {
        Err(Error::DegreeExceedsBound { degree: bound, bound: gb.bound() })
    } else {
        Ok(())
    }
}

/// `0 → A ⊗ kr → A ⊗ V → A → k → 0` with `d(1 ⊗ x) = x` and `d(1 ⊗ r) = Σ u_j ⊗ x_j`.
///
/// `gb` must be a basis for `⟨r⟩` over the `n` generators. With `cokernel_z`
/// set, the same maps are built over the Ore extension (`gb` over `n + 1`
/// letters) and the cokernel is `B/BA_{≥1} ≅ k[z]`, one-dimensional in every degree.
fn two_term_check(pres: &QuadraticPresentation, gb: &TruncatedGb, bound: usize, cokernel_z: bool) -> Result<ExactnessReport> {
    check_bound(gb, bound)?;
    let n = pres.n();
    let nv = gb.nvars();
    let bases = Bases::new(gb, bound);
    let mut cache = NormalFormCache::new(gb);
    let u = left_factors(pres, nv);
    let p0 = [0usize];
    let p1 = vec![1usize; n];
    let p2 = [2usize];
    let mut degrees = Vec::new();
    for k in 0..=bound {
        let d1 = build_map(&bases, &p1, &p0, k, |b, j| Ok(vec![cache.word(&b.concat(&Word::letter(j)))?]))?;
        let d2 = build_map(&bases, &p2, &p1, k, |b, _| u.iter().map(|ui| left_mul(&mut cache, b, ui)).collect())?;
        let dims = vec![bases.module_dim(&p0, k), bases.module_dim(&p1, k), bases.module_dim(&p2, k)];
        let target = if cokernel_z || k == 0 { 1 } else { 0 };
        degrees.push(assess(k, dims, &[d1, d2], target));
    }
    Ok(ExactnessReport { degrees })
}

/// Exactness of the minimal resolution `0 → A ⊗ kr → A ⊗ V → A → k → 0` in degrees `≤ bound`.
pub fn base_resolution_check(pres: &QuadraticPresentation, gb: &TruncatedGb, bound: usize) -> Result<ExactnessReport> {
    if gb.nvars() != pres.n() {
        return Err(Error::AlphabetMismatch { left: pres.n(), right: gb.nvars() });
    }
    two_term_check(pres, gb, bound, false)
}

/// Exactness of `0 → B ⊗ kr → B ⊗ V → B → B/BA_{≥1} → 0`, the base
/// resolution induced up to the Ore extension.
pub fn induced_sequence_check(ore: &OrePresentation, gb: &TruncatedGb, bound: usize) -> Result<ExactnessReport> {
    if gb.nvars() != ore.nvars() {
        return Err(Error::AlphabetMismatch { left: ore.nvars(), right: gb.nvars() });
    }
    two_term_check(&ore.base, gb, bound, true)
}

/// Exactness of the mapping-cone resolution of `k` over `B`:
///
/// `0 → B⊗kr → B⊗kr ⊕ B⊗V → B⊗V ⊕ B → B → k → 0`
///
/// with `∂¹ = (d, f⁰)`, `∂² = [[d, f¹], [0, -d]]`, `∂³ = (f², -d)ᵗ`, where
/// `f²(1⊗r) = z⊗r`, `f¹(1⊗x) = z⊗x - δ(x)` and `f⁰(1) = z`.
pub fn mapping_cone_check(ore: &OrePresentation, gb: &TruncatedGb, bound: usize) -> Result<ExactnessReport> {
    check_bound(gb, bound)?;
    if gb.nvars() != ore.nvars() {
        return Err(Error::AlphabetMismatch { left: ore.nvars(), right: gb.nvars() });
    }
    let n = ore.n();
    let nv = ore.nvars();
    let z = ore.z();
    let bases = Bases::new(gb, bound);
    let mut cache = NormalFormCache::new(gb);
    let u = left_factors(&ore.base, nv);
    let y = derivation_factors(&ore.derivation, nv);
    let zero = NcPoly::zero(nv);

    // generator degrees: P1 = B⊗V ⊕ B(-1), P2 = B⊗kr ⊕ B⊗V(-1), P3 = B⊗kr(-1)
    let p0 = vec![0usize];
    let mut p1 = vec![1usize; n];
    p1.push(1);
    let mut p2 = vec![2usize];
    p2.extend(vec![2usize; n]);
    let p3 = vec![3usize];

    let mut degrees = Vec::new();
    for k in 0..=bound {
        let d1 = build_map(&bases, &p1, &p0, k, |b, g| {
            let letter = if g < n { g } else { z };
            Ok(vec![cache.word(&b.concat(&Word::letter(letter)))?])
        })?;
        let d2 = build_map(&bases, &p2, &p1, k, |b, g| {
            let mut out = vec![zero.clone(); n + 1];
            if g == 0 {
                for (t, ut) in u.iter().enumerate() {
                    out[t] = left_mul(&mut cache, b, ut)?;
                }
            } else {
                let j = g - 1;
                // b z ⊗ x_j - Σ_t b y_{jt} ⊗ x_t, and -b x_j in the B summand
                for t in 0..n {
                    let mut coeff = -&left_mul(&mut cache, b, &y[j][t])?;
                    if t == j {
                        coeff = &coeff + &cache.word(&b.concat(&Word::letter(z)))?;
                    }
                    out[t] = coeff;
                }
                out[n] = -&cache.word(&b.concat(&Word::letter(j)))?;
            }
            Ok(out)
        })?;
        let d3 = build_map(&bases, &p3, &p2, k, |b, _| {
            let mut out = vec![cache.word(&b.concat(&Word::letter(z)))?];
            for ut in &u {
                out.push(-&left_mul(&mut cache, b, ut)?);
            }
            Ok(out)
        })?;
        let dims = vec![
            bases.module_dim(&p0, k),
            bases.module_dim(&p1, k),
            bases.module_dim(&p2, k),
            bases.module_dim(&p3, k),
        ];
        degrees.push(assess(k, dims, &[d1, d2, d3], usize::from(k == 0)));
    }
    Ok(ExactnessReport { degrees })
}

/// Which vertical map to use in the chain-map commutation check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainMapVariant {
    /// `f¹(1⊗x) = z⊗x - δ(x)`.
    Full,
    /// `f¹(1⊗x) = z⊗x`: a control that fails whenever `δ ≠ 0` contributes.
    DropDelta,
}

/// Whether the two squares of the chain map `f = (f², f¹, f⁰)` commute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutationReport {
    /// `f¹ ∘ d = d ∘ f²` on `b ⊗ r` for normal words `b` of degree `≤ bound - 2`.
    pub left_square: bool,
    /// `d ∘ f¹ = f⁰ ∘ d` on `b ⊗ x` for normal words `b` of degree `≤ bound - 2`.
    pub right_square: bool,
}

impl CommutationReport {
    pub fn holds(&self) -> bool {
        self.left_square && self.right_square
    }
}

/// Checks the chain map from the induced sequence to itself given by
/// left multiplication by `z`, corrected by `δ` in the middle.
pub fn chain_map_commutation_check(
    ore: &OrePresentation,
    gb: &TruncatedGb,
    bound: usize,
    variant: ChainMapVariant,
) -> Result<CommutationReport> {
    check_bound(gb, bound)?;
    let n = ore.n();
    let nv = ore.nvars();
    let z = ore.z();
    let mut cache = NormalFormCache::new(gb);
    let u = left_factors(&ore.base, nv);
    let y = derivation_factors(&ore.derivation, nv);
    let keep_delta = variant == ChainMapVariant::Full;
    let zp = word_poly(nv, &[z]);

    let mut left_square = true;
    let mut right_square = true;
    for m in 0..=bound.saturating_sub(2) {
        for b in gb.normal_words(m) {
            // left square on b ⊗ r
            let mut via_f1 = vec![NcPoly::zero(nv); n];
            let mut via_f2 = vec![NcPoly::zero(nv); n];
            for i in 0..n {
                let bu = &NcPoly::monomial(nv, b.clone(), Rational::one()) * &u[i];
                via_f1[i] = &via_f1[i] + &cache.poly(&(&bu * &zp))?;
                if keep_delta {
                    for t in 0..n {
                        via_f1[t] = &via_f1[t] - &cache.poly(&(&bu * &y[i][t]))?;
                    }
                }
                via_f2[i] = cache.poly(&(&(&NcPoly::monomial(nv, b.clone(), Rational::one()) * &zp) * &u[i]))?;
            }
            left_square &= via_f1 == via_f2;

            // right square on b ⊗ x_j
            for j in 0..n {
                let mut lhs = cache.word(&b.concat(&Word::from_indices(&[z, j])))?;
                if keep_delta {
                    let delta = ore.derivation.image(j, nv);
                    lhs = &lhs - &left_mul(&mut cache, &b, &delta)?;
                }
                let rhs = cache.word(&b.concat(&Word::from_indices(&[j, z])))?;
                right_square &= lhs == rhs;
            }
        }
    }
    Ok(CommutationReport { left_square, right_square })
}

/// Degrees `k` where `dim B_k - (n+1) dim B_{k-1} + (n+1) dim B_{k-2} - dim B_{k-3} ≠ [k = 0]`.
pub fn euler_defects(dims: &[u64], n: usize) -> Vec<usize> {
    let at = |k: isize| if k < 0 { 0i128 } else { dims[k as usize] as i128 };
    let m = n as i128 + 1;
    (0..dims.len())
        .filter(|&k| {
            let k = k as isize;
            let e = at(k) - m * at(k - 1) + m * at(k - 2) - at(k - 3);
            e != i128::from(k == 0)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::DerivationSpec;
    use crate::fixtures;
    use crate::normalform::complete_gb;
    use crate::superpotential::ore_presentation;
    use crate::tensoralg::rat;

    fn ore_gb(f: &fixtures::Fixture, bound: usize) -> (OrePresentation, TruncatedGb) {
        let ore = ore_presentation(&f.presentation, &f.derivation, "z").unwrap();
        let gb = complete_gb(ore.nvars(), &ore.relations, bound).unwrap();
        (ore, gb)
    }

    #[test]
    fn polynomial_plane_resolution() {
        let f = fixtures::polynomial_extension(2);
        let gb = complete_gb(2, &[f.presentation.relation.clone()], 5).unwrap();
        let report = base_resolution_check(&f.presentation, &gb, 5).unwrap();
        assert!(report.holds(), "{report:?}");
        let dims: Vec<usize> = report.degrees.iter().map(|d| d.dims[0]).collect();
        assert_eq!(dims, vec![1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn twogen_mapping_cone() {
        let f = fixtures::twogen(rat(1), rat(1), rat(1));
        let (ore, gb) = ore_gb(&f, 6);
        assert!(mapping_cone_check(&ore, &gb, 6).unwrap().holds());
        assert!(induced_sequence_check(&ore, &gb, 6).unwrap().holds());
        let report = mapping_cone_check(&ore, &gb, 6).unwrap();
        assert!(report.euler_characteristics().iter().enumerate().all(|(k, &e)| e == i64::from(k == 0)));
    }

    #[test]
    fn chain_map_commutes_and_control_fails() {
        let f = fixtures::twogen(rat(1), rat(1), rat(1));
        let (ore, gb) = ore_gb(&f, 4);
        assert!(chain_map_commutation_check(&ore, &gb, 4, ChainMapVariant::Full).unwrap().holds());
        assert!(!chain_map_commutation_check(&ore, &gb, 4, ChainMapVariant::DropDelta).unwrap().holds());
    }

    #[test]
    fn zero_derivation_commutes_either_way() {
        let f = fixtures::polynomial_extension(2);
        let (ore, gb) = ore_gb(&f, 4);
        assert!(chain_map_commutation_check(&ore, &gb, 4, ChainMapVariant::Full).unwrap().holds());
        assert!(chain_map_commutation_check(&ore, &gb, 4, ChainMapVariant::DropDelta).unwrap().holds());
    }

    #[test]
    fn broken_cone_detected() {
        // with δ(r) ≠ 0 the left square cannot commute
        let f = fixtures::polynomial_extension(2);
        let mut d = DerivationSpec::zero(2);
        d.set(1, 0, 1, rat(1));
        let ore = ore_presentation(&f.presentation, &d, "z").unwrap();
        let gb = complete_gb(3, &ore.relations, 4).unwrap();
        assert!(!chain_map_commutation_check(&ore, &gb, 4, ChainMapVariant::Full).unwrap().left_square);
    }

    #[test]
    fn bound_beyond_gb_rejected() {
        let f = fixtures::polynomial_extension(2);
        let (ore, gb) = ore_gb(&f, 3);
        assert!(matches!(mapping_cone_check(&ore, &gb, 4), Err(Error::DegreeExceedsBound { .. })));
    }

    #[test]
    fn euler_defect_detection() {
        assert!(euler_defects(&[1, 3, 6, 10, 15], 2).is_empty());
        assert_eq!(euler_defects(&[1, 3, 6, 11], 2), vec![3]);
    }
}
