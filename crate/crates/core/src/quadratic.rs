//! Anti-symmetric matrices, the quadratic relation they define, and congruence
//! reduction to the standard anti-diagonal form.

use num_traits::{One, Zero};

use crate::derivation::DerivationSpec;
use crate::error::{Error, Result};
use crate::tensoralg::{GeneratorSet, Homogeneity, NcPoly, RatMatrix, Rational, Word};

/// Square matrix with `Mᵗ = -M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AntiSymMatrix {
    m: RatMatrix,
    rank: usize,
}

impl AntiSymMatrix {
    pub fn new(m: RatMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!("{}x{} matrix is not square", m.rows(), m.cols())));
        }
        for i in 0..m.rows() {
            for j in i..m.cols() {
                if m.get(i, j) != &-m.get(j, i).clone() {
                    return Err(Error::NotAntiSymmetric { row: i, col: j });
                }
            }
        }
        let rank = m.rank();
        Ok(AntiSymMatrix { m, rank })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(RatMatrix::from_i64(rows))
    }

    /// The standard form: `+1` on the upper half of the anti-diagonal, `-1` on the lower half.
    pub fn standard(n: usize) -> Result<Self> {
        if n == 0 || n % 2 == 1 {
            return Err(Error::Precondition(format!("standard form needs a positive even size, got {n}")));
        }
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            let v = if i < n / 2 { Rational::one() } else { -Rational::one() };
            m.set(i, n - 1 - i, v);
        }
        Self::new(m)
    }

    pub fn n(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.m
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        self.m.get(i, j)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_invertible(&self) -> bool {
        self.rank == self.n()
    }

    /// `Pᵗ M P`.
    pub fn congruent(&self, p: &RatMatrix) -> Result<AntiSymMatrix> {
        let pt = p.transpose();
        let out = pt.try_mul(&self.m)?.try_mul(p)?;
        AntiSymMatrix::new(out)
    }
}

/// Generators, anti-symmetric matrix and the relation `r = Σ m_ij x_i x_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticPresentation {
    pub gens: GeneratorSet,
    pub matrix: AntiSymMatrix,
    pub relation: NcPoly,
}

impl QuadraticPresentation {
    pub fn n(&self) -> usize {
        self.gens.len()
    }
}

/// Builds `r = (x_1, .., x_n) M (x_1, .., x_n)ᵗ`.
pub fn relation_from_matrix(m: &AntiSymMatrix, gens: &GeneratorSet) -> Result<QuadraticPresentation> {
    let n = m.n();
    if gens.len() != n || gens.z_index().is_some() {
        return Err(Error::DimensionMismatch(format!("{n}x{n} matrix for {} generators", gens.len())));
    }
    let mut r = NcPoly::zero(n);
    for i in 0..n {
        for j in 0..n {
            r.add_term(Word::from_indices(&[i, j]), m.get(i, j).clone());
        }
    }
    Ok(QuadraticPresentation { gens: gens.clone(), matrix: m.clone(), relation: r })
}

/// As [`relation_from_matrix`], additionally demanding that `M` be invertible.
pub fn relation_from_invertible_matrix(m: &AntiSymMatrix, gens: &GeneratorSet) -> Result<QuadraticPresentation> {
    if !m.is_invertible() {
        return Err(Error::Singular);
    }
    relation_from_matrix(m, gens)
}

/// Rank of a degree-two tensor, i.e. of its `n x n` coefficient matrix.
pub fn rank_of_tensor(r: &NcPoly) -> Result<usize> {
    match r.homogeneity() {
        Homogeneity::Zero => return Ok(0),
        Homogeneity::Degree(2) => {}
        Homogeneity::Degree(d) => return Err(Error::WrongDegree { expected: 2, found: d }),
        Homogeneity::Mixed => return Err(Error::Inhomogeneous),
    }
    Ok(coefficient_matrix(r).rank())
}

/// `(c_ij)` with `r = Σ c_ij x_i x_j`; `r` must be homogeneous of degree 2.
pub(crate) fn coefficient_matrix(r: &NcPoly) -> RatMatrix {
    let n = r.nvars();
    let mut m = RatMatrix::zeros(n, n);
    for (w, c) in r.terms() {
        let l = w.letters();
        m.set(l[0] as usize, l[1] as usize, c.clone());
    }
    m
}

/// True iff `M` is exactly the standard anti-diagonal form.
pub fn is_standard(m: &AntiSymMatrix) -> bool {
    let n = m.n();
    if n == 0 || n % 2 == 1 {
        return false;
    }
    (0..n).all(|i| {
        (0..n).all(|j| {
            let expected = if j == n - 1 - i {
                if i < n / 2 {
                    Rational::one()
                } else {
                    -Rational::one()
                }
            } else {
                Rational::zero()
            };
            m.get(i, j) == &expected
        })
    })
}

/// Finds an invertible `P` with `Pᵗ M P` standard.
///
/// Builds a symplectic basis `e_1, f_1, ..` by skew Gram–Schmidt (pivot: first
/// remaining vector pairing nonzero with `e`) and places `e_i` in column `i`,
/// `f_i` in column `n - 1 - i`. The postcondition is re-checked before returning.
pub fn reduce_to_standard(m: &AntiSymMatrix) -> Result<RatMatrix> {
    let n = m.n();
    if n % 2 == 1 || !m.is_invertible() {
        return Err(Error::Singular);
    }
    let form = |u: &[Rational], v: &[Rational]| -> Rational {
        let mut acc = Rational::zero();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if !vj.is_zero() {
                    acc += ui * m.get(i, j) * vj;
                }
            }
        }
        acc
    };
    let mut remaining: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    let mut p = RatMatrix::zeros(n, n);
    for k in 0..n / 2 {
        let e = remaining.remove(0);
        let pos = remaining
            .iter()
            .position(|v| !form(&e, v).is_zero())
            .ok_or(Error::Singular)?;
        let f_raw = remaining.remove(pos);
        let pairing = form(&e, &f_raw);
        let f: Vec<Rational> = f_raw.iter().map(|x| x / &pairing).collect();
        for v in remaining.iter_mut() {
            // v - ω(v,f) e + ω(v,e) f is orthogonal to both e and f
            let a = form(v, &f);
            let b = form(v, &e);
            for i in 0..n {
                let delta = &b * &f[i] - &a * &e[i];
                v[i] += delta;
            }
        }
        for i in 0..n {
            p.set(i, k, e[i].clone());
            p.set(i, n - 1 - k, f[i].clone());
        }
    }
    let reduced = m.congruent(&p)?;
    if !is_standard(&reduced) {
        return Err(Error::Precondition("standard-form reduction failed its postcondition".into()));
    }
    Ok(p)
}

/// Signed permutation `P` with `Pᵗ S P = S` for the standard `S` of size `n`,
/// whose last column is `±e_j`. Moves a distinguished generator to the last
/// position without leaving standard form.
pub fn symplectic_relabel(n: usize, j: usize) -> Result<RatMatrix> {
    if n == 0 || n % 2 == 1 || j >= n {
        return Err(Error::IndexOutOfRange { index: j, n });
    }
    let mut p = RatMatrix::identity(n);
    if j == n - 1 {
        return Ok(p);
    }
    let partner = n - 1 - j;
    for c in [0, n - 1, j, partner] {
        p.set(c, c, Rational::zero());
    }
    if j >= n / 2 {
        // j is an f-vector: swap the pairs (0, n-1) <-> (partner, j)
        p.set(j, n - 1, Rational::one());
        p.set(partner, 0, Rational::one());
        p.set(n - 1, j, Rational::one());
        p.set(0, partner, Rational::one());
    } else if j == 0 {
        // swap inside the first pair: new e_1 = -x_n, new f_1 = x_1
        p.set(0, n - 1, Rational::one());
        p.set(n - 1, 0, -Rational::one());
    } else {
        // j is an e-vector: new f_1 = x_j, new e_1 = -x_partner
        p.set(j, n - 1, Rational::one());
        p.set(partner, 0, -Rational::one());
        // old pair (x_1, x_n) takes the slots (partner, j) with a sign keeping ω = 1
        p.set(n - 1, j, Rational::one());
        p.set(0, partner, -Rational::one());
    }
    Ok(p)
}

/// Why the coherence hypothesis fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoherencePreconditionFailure {
    pub matrix_not_standard: bool,
    pub no_square_free_index: bool,
}

/// Returns the largest 0-based index `j` with `k^i_{jj} = 0` for every `i`,
/// provided `M` is standard; otherwise reports which condition fails.
pub fn coherence_precondition(
    m: &AntiSymMatrix,
    d: &DerivationSpec,
) -> std::result::Result<usize, CoherencePreconditionFailure> {
    let candidates = square_free_indices(d);
    let standard = is_standard(m) && m.n() == d.n();
    match (standard, candidates.last()) {
        (true, Some(&j)) => Ok(j),
        (s, c) => Err(CoherencePreconditionFailure { matrix_not_standard: !s, no_square_free_index: c.is_none() }),
    }
}

/// All `j` with `k^i_{jj} = 0` for every `i`, increasing.
pub fn square_free_indices(d: &DerivationSpec) -> Vec<usize> {
    let n = d.n();
    (0..n).filter(|&j| (0..n).all(|i| d.coeff(i, j, j).is_zero())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::tensoralg::{parse_poly, rat, ratio};

    #[test]
    fn two_by_two_relation() {
        let m = AntiSymMatrix::from_i64(&[&[0, 1], &[-1, 0]]).unwrap();
        let gens = GeneratorSet::new(["x1", "x2"]).unwrap();
        let pres = relation_from_matrix(&m, &gens).unwrap();
        assert_eq!(pres.relation, parse_poly(&gens, "x1x2 - x2x1").unwrap());
    }

    #[test]
    fn smith_relation() {
        let f = fixtures::smith();
        let gens = &f.presentation.gens;
        let expected = parse_poly(gens, "x1x6 - x2x5 - x3x4 + x4x3 + x5x2 - x6x1").unwrap();
        assert_eq!(f.presentation.relation, expected);
    }

    #[test]
    fn zero_matrix_rejected_when_invertibility_demanded() {
        let m = AntiSymMatrix::from_i64(&[&[0, 0], &[0, 0]]).unwrap();
        let gens = GeneratorSet::indexed("x", 2);
        assert_eq!(relation_from_invertible_matrix(&m, &gens), Err(Error::Singular));
        assert!(relation_from_matrix(&m, &gens).unwrap().relation.is_zero());
    }

    #[test]
    fn non_antisymmetric_rejected() {
        assert!(matches!(
            AntiSymMatrix::from_i64(&[&[0, 1], &[1, 0]]),
            Err(Error::NotAntiSymmetric { .. })
        ));
        assert!(AntiSymMatrix::from_i64(&[&[1, 0], &[0, -1]]).is_err());
    }

    #[test]
    fn size_mismatch() {
        let m = AntiSymMatrix::standard(2).unwrap();
        assert!(relation_from_matrix(&m, &GeneratorSet::indexed("x", 3)).is_err());
    }

    #[test]
    fn tensor_ranks() {
        let gens = GeneratorSet::indexed("x", 2);
        assert_eq!(rank_of_tensor(&parse_poly(&gens, "x1x2 - x2x1").unwrap()).unwrap(), 2);
        assert_eq!(rank_of_tensor(&parse_poly(&gens, "x1x2").unwrap()).unwrap(), 1);
        assert_eq!(rank_of_tensor(&fixtures::smith().presentation.relation).unwrap(), 6);
        assert!(matches!(
            rank_of_tensor(&parse_poly(&gens, "x1x2x1").unwrap()),
            Err(Error::WrongDegree { .. })
        ));
    }

    #[test]
    fn standard_detection() {
        assert!(is_standard(&AntiSymMatrix::from_i64(&[&[0, 1], &[-1, 0]]).unwrap()));
        assert!(is_standard(&AntiSymMatrix::standard(6).unwrap()));
        // anti-diagonal signs (+,-,-,+,+,-) are not the standard (+,+,+,-,-,-)
        assert!(!is_standard(&fixtures::smith().presentation.matrix));
        let mut m = AntiSymMatrix::standard(4).unwrap().matrix().clone();
        m.set(0, 1, rat(1));
        m.set(1, 0, rat(-1));
        assert!(!is_standard(&AntiSymMatrix::new(m).unwrap()));
    }

    #[test]
    fn reduce_standard_is_identity_on_standard() {
        let s = AntiSymMatrix::standard(4).unwrap();
        let p = reduce_to_standard(&s).unwrap();
        assert_eq!(p, RatMatrix::identity(4));
    }

    #[test]
    fn reduce_smith_gives_signed_permutation() {
        let m = fixtures::smith().presentation.matrix;
        let p = reduce_to_standard(&m).unwrap();
        assert!(is_standard(&m.congruent(&p).unwrap()));
        let expected = RatMatrix::diagonal(&[rat(1), rat(1), rat(1), rat(-1), rat(-1), rat(1)]);
        assert_eq!(p, expected);
    }

    #[test]
    fn reduce_scaled_two_by_two() {
        let m = AntiSymMatrix::from_i64(&[&[0, 2], &[-2, 0]]).unwrap();
        let p = reduce_to_standard(&m).unwrap();
        assert_eq!(p, RatMatrix::diagonal(&[rat(1), ratio(1, 2)]));
        assert!(is_standard(&m.congruent(&p).unwrap()));
    }

    #[test]
    fn odd_size_is_singular() {
        let m = AntiSymMatrix::from_i64(&[&[0, 1, 2], &[-1, 0, 3], &[-2, -3, 0]]).unwrap();
        assert!(!m.is_invertible());
        assert_eq!(reduce_to_standard(&m), Err(Error::Singular));
    }

    #[test]
    fn relabel_keeps_standard_form() {
        for n in [2, 4, 6] {
            let s = AntiSymMatrix::standard(n).unwrap();
            for j in 0..n {
                let p = symplectic_relabel(n, j).unwrap();
                assert_eq!(s.congruent(&p).unwrap(), s, "n={n} j={j}");
                let last = p.column(n - 1);
                for (i, v) in last.iter().enumerate() {
                    assert_eq!(!v.is_zero(), i == j);
                }
            }
        }
    }

    #[test]
    fn coherence_precondition_cases() {
        let s2 = AntiSymMatrix::standard(2).unwrap();
        let mut d = DerivationSpec::zero(2);
        d.set(0, 0, 0, rat(1)); // delta(x1) = x1 x1
        assert_eq!(coherence_precondition(&s2, &d), Ok(1));
        d.set(1, 1, 1, rat(1));
        assert_eq!(
            coherence_precondition(&s2, &d),
            Err(CoherencePreconditionFailure { matrix_not_standard: false, no_square_free_index: true })
        );
        let s4 = AntiSymMatrix::standard(4).unwrap();
        assert_eq!(coherence_precondition(&s4, &DerivationSpec::zero(4)), Ok(3));
        let smith = fixtures::smith();
        let err = coherence_precondition(&smith.presentation.matrix, &smith.derivation).unwrap_err();
        assert!(err.matrix_not_standard && !err.no_square_free_index);
    }
}
