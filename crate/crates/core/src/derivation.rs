//! Degree-one derivations of T(V) given by a coefficient cube
//! `δ(x_i) = Σ_{s,t} k^i_{st} x_s x_t`.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::quadratic::{relation_from_matrix, QuadraticPresentation};
use crate::tensoralg::{rank_and_solve, NcPoly, RatMatrix, Rational, Solution, Word};

/// Coefficient cube `k^i_{st}` of a degree-one derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationSpec {
    n: usize,
    coeffs: Vec<Rational>,
}

impl DerivationSpec {
    pub fn zero(n: usize) -> Self {
        DerivationSpec { n, coeffs: vec![Rational::zero(); n * n * n] }
    }

    /// From the images `δ(x_i)`, each homogeneous of degree 2 (or zero).
    pub fn from_images(images: &[NcPoly]) -> Result<Self> {
        let n = images.len();
        let mut d = Self::zero(n);
        for (i, img) in images.iter().enumerate() {
            if img.nvars() != n {
                return Err(Error::AlphabetMismatch { left: n, right: img.nvars() });
            }
            for (w, c) in img.terms() {
                if w.len() != 2 {
                    return Err(Error::WrongDegree { expected: 2, found: w.len() });
                }
                let l = w.letters();
                d.set(i, l[0] as usize, l[1] as usize, c.clone());
            }
        }
        Ok(d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn idx(&self, i: usize, s: usize, t: usize) -> usize {
        assert!(i < self.n && s < self.n && t < self.n, "derivation index out of range");
        (i * self.n + s) * self.n + t
    }

    /// `k^i_{st}` (0-based).
    pub fn coeff(&self, i: usize, s: usize, t: usize) -> &Rational {
        &self.coeffs[self.idx(i, s, t)]
    }

    pub fn set(&mut self, i: usize, s: usize, t: usize, v: Rational) {
        let k = self.idx(i, s, t);
        self.coeffs[k] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `δ(x_i)` as a polynomial over `nvars ≥ n` letters.
    pub fn image(&self, i: usize, nvars: usize) -> NcPoly {
        assert!(nvars >= self.n);
        let mut p = NcPoly::zero(nvars);
        for s in 0..self.n {
            for t in 0..self.n {
                p.add_term(Word::from_indices(&[s, t]), self.coeff(i, s, t).clone());
            }
        }
        p
    }

    pub fn images(&self) -> Vec<NcPoly> {
        (0..self.n).map(|i| self.image(i, self.n)).collect()
    }
}

/// Leibniz extension of `d` to a polynomial over the same alphabet.
pub fn extend_derivation(d: &DerivationSpec, p: &NcPoly) -> Result<NcPoly> {
    if p.nvars() != d.n {
        return Err(Error::AlphabetMismatch { left: d.n, right: p.nvars() });
    }
    let images = d.images();
    let mut out = NcPoly::zero(d.n);
    for (w, c) in p.terms() {
        let letters = w.letters();
        for (j, &l) in letters.iter().enumerate() {
            let img = &images[l as usize];
            let prefix = Word::new(letters[..j].to_vec());
            let suffix = Word::new(letters[j + 1..].to_vec());
            for (v, e) in img.terms() {
                out.add_term(prefix.concat(v).concat(&suffix), c * e);
            }
        }
    }
    Ok(out)
}

fn check_alphabet(d: &DerivationSpec, pres: &QuadraticPresentation) -> Result<()> {
    if d.n != pres.n() {
        return Err(Error::AlphabetMismatch { left: pres.n(), right: d.n });
    }
    Ok(())
}

/// `δ(r) = 0` in T(V).
pub fn check_delta_r_zero(d: &DerivationSpec, pres: &QuadraticPresentation) -> Result<bool> {
    check_alphabet(d, pres)?;
    Ok(extend_derivation(d, &pres.relation)?.is_zero())
}

/// Outcome of the degree-3 ideal membership test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdealMembership {
    /// `target = Σ a_i x_i r + Σ b_i r x_i`.
    Member { left: Vec<Rational>, right: Vec<Rational> },
    /// A functional on degree-3 words (indexed base-`n`) vanishing on `⟨r⟩_3`
    /// and taking the value 1 on the target.
    NotMember { functional: Vec<Rational> },
}

impl IdealMembership {
    pub fn is_member(&self) -> bool {
        matches!(self, IdealMembership::Member { .. })
    }
}

/// Decides whether a degree-3 element lies in `⟨r⟩_3 = V r + r V`.
pub fn degree3_ideal_membership(target: &NcPoly, r: &NcPoly) -> Result<IdealMembership> {
    let n = r.nvars();
    if target.nvars() != n {
        return Err(Error::AlphabetMismatch { left: n, right: target.nvars() });
    }
    if target.is_zero() {
        let z = vec![Rational::zero(); n];
        return Ok(IdealMembership::Member { left: z.clone(), right: z });
    }
    let mut columns = Vec::with_capacity(2 * n);
    for i in 0..n {
        columns.push((&NcPoly::var(n, i) * r).dense_coefficients(3)?);
    }
    for i in 0..n {
        columns.push((r * &NcPoly::var(n, i)).dense_coefficients(3)?);
    }
    let rows = n * n * n;
    let mut a = RatMatrix::zeros(rows, 2 * n);
    for (j, col) in columns.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            if !v.is_zero() {
                a.set(i, j, v.clone());
            }
        }
    }
    let b = target.dense_coefficients(3)?;
    match rank_and_solve(&a, Some(&b))?.1 {
        Some(Solution::Consistent(x)) => {
            let right = x[n..].to_vec();
            let mut left = x;
            left.truncate(n);
            Ok(IdealMembership::Member { left, right })
        }
        Some(Solution::Inconsistent(y)) => Ok(IdealMembership::NotMember { functional: y }),
        None => unreachable!("right-hand side supplied"),
    }
}

/// Whether `δ(r) ∈ ⟨r⟩`, which is what is needed for δ to descend to `A = T(V)/⟨r⟩`.
pub fn check_delta_r_in_ideal(d: &DerivationSpec, pres: &QuadraticPresentation) -> Result<IdealMembership> {
    check_alphabet(d, pres)?;
    let dr = extend_derivation(d, &pres.relation)?;
    degree3_ideal_membership(&dr, &pres.relation)
}

/// Rewrites `d` in the generators `y` defined by `x = P y`.
///
/// The result satisfies `δ'(y_j) = Σ_i (P⁻¹)_{ji} δ(x_i)|_{x = P y}`, so the
/// substitution `x ↦ P y` intertwines `δ` and `δ'`, and the relation of `M`
/// becomes the relation of `Pᵗ M P`.
pub fn transport_derivation(d: &DerivationSpec, p: &RatMatrix) -> Result<DerivationSpec> {
    let n = d.n;
    if p.rows() != n || p.cols() != n {
        return Err(Error::DimensionMismatch(format!("{}x{} change of basis for n = {n}", p.rows(), p.cols())));
    }
    let pinv = p.inverse()?;
    // substituted images φ(δ(x_i)) with k_i(u, v) = Σ_{s,t} k^i_{st} P_su P_tv
    let mut sub = vec![Rational::zero(); n * n * n];
    for i in 0..n {
        for s in 0..n {
            for t in 0..n {
                let k = d.coeff(i, s, t);
                if k.is_zero() {
                    continue;
                }
                for u in 0..n {
                    let ku = k * p.get(s, u);
                    if ku.is_zero() {
                        continue;
                    }
                    for v in 0..n {
                        let pv = p.get(t, v);
                        if !pv.is_zero() {
                            sub[(i * n + u) * n + v] += &ku * pv;
                        }
                    }
                }
            }
        }
    }
    let mut out = DerivationSpec::zero(n);
    for j in 0..n {
        for i in 0..n {
            let c = pinv.get(j, i);
            if c.is_zero() {
                continue;
            }
            for uv in 0..n * n {
                let v = &sub[i * n * n + uv];
                if !v.is_zero() {
                    out.coeffs[j * n * n + uv] += c * v;
                }
            }
        }
    }
    Ok(out)
}

/// Transports a presentation and derivation along `x = P y`: the matrix becomes
/// `Pᵗ M P` and the derivation is rewritten by [`transport_derivation`].
pub fn transport_presentation(
    pres: &QuadraticPresentation,
    d: &DerivationSpec,
    p: &RatMatrix,
) -> Result<(QuadraticPresentation, DerivationSpec)> {
    let m = pres.matrix.congruent(p)?;
    Ok((relation_from_matrix(&m, &pres.gens)?, transport_derivation(d, p)?))
}

/// The degree-one substitution `x_i ↦ Σ_j P_ij y_j` as generator images,
/// optionally over a larger alphabet whose extra letters are fixed.
pub fn linear_substitution(p: &RatMatrix, nvars: usize) -> Vec<NcPoly> {
    let n = p.rows();
    (0..nvars)
        .map(|i| {
            if i < n {
                let mut img = NcPoly::zero(nvars);
                for j in 0..n {
                    img.add_term(Word::letter(j), p.get(i, j).clone());
                }
                img
            } else {
                NcPoly::var(nvars, i)
            }
        })
        .collect()
}
