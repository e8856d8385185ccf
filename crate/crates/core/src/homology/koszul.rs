use num_traits::{One, Zero};

use crate::derivation::DerivationSpec;
use crate::error::{Error, Result};
use crate::tensoralg::{RatMatrix, Rational};

/// Element of the quadratic dual `A!`: `c0 ∈ A!_0`, `v ∈ A!_1 = V*` in the dual
/// basis, and `c2` the coefficient of `r*` spanning `A!_2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulDualElement {
    pub c0: Rational,
    pub v: Vec<Rational>,
    pub c2: Rational,
}

impl KoszulDualElement {
    pub fn zero(n: usize) -> Self {
        KoszulDualElement { c0: Rational::zero(), v: vec![Rational::zero(); n], c2: Rational::zero() }
    }

    pub fn unit(n: usize) -> Self {
        KoszulDualElement { c0: Rational::one(), ..Self::zero(n) }
    }

    pub fn linear(v: Vec<Rational>) -> Self {
        let n = v.len();
        KoszulDualElement { v, ..Self::zero(n) }
    }

    /// The dual basis vector `x_i*`.
    pub fn dual_basis(n: usize, i: usize) -> Self {
        let mut e = Self::zero(n);
        e.v[i] = Rational::one();
        e
    }

    /// `c · r*`.
    pub fn top(n: usize, c: Rational) -> Self {
        KoszulDualElement { c2: c, ..Self::zero(n) }
    }

    pub fn n(&self) -> usize {
        self.v.len()
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c2.is_zero() && self.v.iter().all(Zero::is_zero)
    }

    /// `Some(d)` when exactly one graded part is nonzero.
    pub fn degree(&self) -> Option<usize> {
        let parts = [!self.c0.is_zero(), self.v.iter().any(|x| !x.is_zero()), !self.c2.is_zero()];
        match parts {
            [true, false, false] => Some(0),
            [false, true, false] => Some(1),
            [false, false, true] => Some(2),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        KoszulDualElement {
            c0: &self.c0 + &other.c0,
            v: self.v.iter().zip(&other.v).map(|(a, b)| a + b).collect(),
            c2: &self.c2 + &other.c2,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        KoszulDualElement { c0: &self.c0 * c, v: self.v.iter().map(|a| a * c).collect(), c2: &self.c2 * c }
    }

    /// The automorphism `ε`: `-1` on degree 1, identity elsewhere.
    pub fn epsilon(&self) -> Self {
        KoszulDualElement { c0: self.c0.clone(), v: self.v.iter().map(|a| -a).collect(), c2: self.c2.clone() }
    }
}

/// `aᵗ M b`.
pub fn bilinear(a: &[Rational], m: &RatMatrix, b: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                acc += ai * m.get(i, j) * bj;
            }
        }
    }
    acc
}

/// Product in `A!`: degree-one parts multiply to `(aᵗ M b) r*`, and everything
/// beyond degree 2 vanishes. Extended bilinearly to inhomogeneous elements.
///
/// Takes a plain matrix so that the anti-symmetry requirement can be dropped in
/// negative tests.
pub fn koszul_dual_mul(a: &KoszulDualElement, b: &KoszulDualElement, m: &RatMatrix) -> Result<KoszulDualElement> {
    let n = a.n();
    if b.n() != n || m.rows() != n || m.cols() != n {
        return Err(Error::DimensionMismatch(format!("A! product with sizes {}, {} and matrix {}x{}", n, b.n(), m.rows(), m.cols())));
    }
    Ok(KoszulDualElement {
        c0: &a.c0 * &b.c0,
        v: a.v.iter().zip(&b.v).map(|(x, y)| &a.c0 * y + x * &b.c0).collect(),
        c2: &a.c0 * &b.c2 + &a.c2 * &b.c0 + bilinear(&a.v, m, &b.v),
    })
}

/// Element of `E(B) ≅ A! ⊕ A!(-1)`. The degree-`d` component is
/// `first` in `A!_d` together with `second` in `A!_{d-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YonedaElement {
    pub first: KoszulDualElement,
    pub second: KoszulDualElement,
}

/// The graded pieces of a Yoneda element.
struct Components {
    e0: Rational,
    e1: (Vec<Rational>, Rational),
    e2: (Rational, Vec<Rational>),
    e3: Rational,
}

impl YonedaElement {
    pub fn zero(n: usize) -> Self {
        YonedaElement { first: KoszulDualElement::zero(n), second: KoszulDualElement::zero(n) }
    }

    pub fn unit(n: usize) -> Self {
        YonedaElement { first: KoszulDualElement::unit(n), second: KoszulDualElement::zero(n) }
    }

    /// `(α, k) ∈ E¹`.
    pub fn degree_one(alpha: Vec<Rational>, k: Rational) -> Self {
        let n = alpha.len();
        YonedaElement { first: KoszulDualElement::linear(alpha), second: KoszulDualElement { c0: k, ..KoszulDualElement::zero(n) } }
    }

    /// `(c r*, β) ∈ E²`.
    pub fn degree_two(c: Rational, beta: Vec<Rational>) -> Self {
        let n = beta.len();
        YonedaElement { first: KoszulDualElement::top(n, c), second: KoszulDualElement::linear(beta) }
    }

    /// `(0, c r*) ∈ E³`.
    pub fn degree_three(n: usize, c: Rational) -> Self {
        YonedaElement { first: KoszulDualElement::zero(n), second: KoszulDualElement::top(n, c) }
    }

    pub fn n(&self) -> usize {
        self.first.n()
    }

    pub fn is_zero(&self) -> bool {
        self.first.is_zero() && self.second.is_zero()
    }

    fn components(&self) -> Components {
        Components {
            e0: self.first.c0.clone(),
            e1: (self.first.v.clone(), self.second.c0.clone()),
            e2: (self.first.c2.clone(), self.second.v.clone()),
            e3: self.second.c2.clone(),
        }
    }

    fn from_components(c: Components) -> Self {
        YonedaElement {
            first: KoszulDualElement { c0: c.e0, v: c.e1.0, c2: c.e2.0 },
            second: KoszulDualElement { c0: c.e1.1, v: c.e2.1, c2: c.e3 },
        }
    }

    /// `Some(d)` when the element is nonzero and lies in `E^d`.
    pub fn degree(&self) -> Option<usize> {
        let c = self.components();
        let nz = [
            !c.e0.is_zero(),
            !c.e1.1.is_zero() || c.e1.0.iter().any(|x| !x.is_zero()),
            !c.e2.0.is_zero() || c.e2.1.iter().any(|x| !x.is_zero()),
            !c.e3.is_zero(),
        ];
        let mut it = nz.iter().enumerate().filter(|(_, b)| **b);
        match (it.next(), it.next()) {
            (Some((d, _)), None) => Some(d),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        YonedaElement { first: self.first.add(&other.first), second: self.second.add(&other.second) }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        YonedaElement { first: self.first.scale(c), second: self.second.scale(c) }
    }

    /// Coefficient of the fixed generator `(0, r*)` of `E³`.
    pub fn top_coefficient(&self) -> &Rational {
        &self.second.c2
    }
}

/// The functional `(β ⊗ α) ∘ δ : x_i ↦ Σ_{s,t} k^i_{st} β(x_s) α(x_t)`.
pub fn correction_functional(beta: &[Rational], alpha: &[Rational], d: &DerivationSpec) -> Vec<Rational> {
    let n = d.n();
    (0..n)
        .map(|i| {
            let mut acc = Rational::zero();
            for s in 0..n {
                if beta[s].is_zero() {
                    continue;
                }
                for t in 0..n {
                    let k = d.coeff(i, s, t);
                    if !k.is_zero() && !alpha[t].is_zero() {
                        acc += k * &beta[s] * &alpha[t];
                    }
                }
            }
            acc
        })
        .collect()
}

/// Yoneda product on `E(B)`:
///
/// - `(β, k') * (α, k) = (βα, k'α - kβ - (β⊗α)∘δ)` on `E¹ × E¹`,
/// - `(α, k) * (c r*, β) = (ck - αᵗMβ) (0, r*)` on `E¹ × E²`,
/// - `(c r*, β) * (α, k) = (ck + βᵗMα) (0, r*)` on `E² × E¹`,
///
/// with `E⁰` acting by scalars and all other products zero. For anti-symmetric
/// `M` the two mixed products agree; the matrix is taken as given so that this
/// dependence can be exercised.
pub fn yoneda_mul(u: &YonedaElement, v: &YonedaElement, m: &RatMatrix, d: &DerivationSpec) -> Result<YonedaElement> {
    let n = u.n();
    if v.n() != n || d.n() != n || m.rows() != n || m.cols() != n {
        return Err(Error::DimensionMismatch(format!("Yoneda product over n = {n}")));
    }
    let (a, b) = (u.components(), v.components());
    let zero_v = || vec![Rational::zero(); n];
    let mut out = Components {
        e0: &a.e0 * &b.e0,
        e1: (
            a.e1.0.iter().zip(&b.e1.0).map(|(x, y)| &a.e0 * y + x * &b.e0).collect(),
            &a.e0 * &b.e1.1 + &a.e1.1 * &b.e0,
        ),
        e2: (&a.e0 * &b.e2.0 + &a.e2.0 * &b.e0, a.e2.1.iter().zip(&b.e2.1).map(|(x, y)| &a.e0 * y + x * &b.e0).collect()),
        e3: &a.e0 * &b.e3 + &a.e3 * &b.e0,
    };
    // E¹ × E¹
    let (beta, kp) = &a.e1;
    let (alpha, k) = &b.e1;
    out.e2.0 += bilinear(beta, m, alpha);
    let corr = correction_functional(beta, alpha, d);
    let mut second = zero_v();
    for i in 0..n {
        second[i] = kp * &alpha[i] - k * &beta[i] - &corr[i];
    }
    for (o, s) in out.e2.1.iter_mut().zip(second) {
        *o += s;
    }
    // E¹ × E²
    let (alpha, k) = &a.e1;
    let (c, beta) = &b.e2;
    out.e3 += c * k - bilinear(alpha, m, beta);
    // E² × E¹
    let (c, beta) = &a.e2;
    let (alpha, k) = &b.e1;
    out.e3 += c * k + bilinear(beta, m, alpha);
    Ok(YonedaElement::from_components(out))
}

/// Graded basis of `E(B)`: degree 0 `(1, 0)`; degree 1 `(x_i*, 0)` then `(0, 1)`;
/// degree 2 `(r*, 0)` then `(0, x_i*)`; degree 3 `(0, r*)`.
pub fn yoneda_basis(n: usize) -> Vec<Vec<YonedaElement>> {
    let e = |i: usize| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect::<Vec<_>>();
    let zeros = || vec![Rational::zero(); n];
    let mut deg1: Vec<YonedaElement> = (0..n).map(|i| YonedaElement::degree_one(e(i), Rational::zero())).collect();
    deg1.push(YonedaElement::degree_one(zeros(), Rational::one()));
    let mut deg2 = vec![YonedaElement::degree_two(Rational::one(), zeros())];
    deg2.extend((0..n).map(|i| YonedaElement::degree_two(Rational::zero(), e(i))));
    vec![vec![YonedaElement::unit(n)], deg1, deg2, vec![YonedaElement::degree_three(n, Rational::one())]]
}

pub fn yoneda_dims(n: usize) -> Vec<usize> {
    yoneda_basis(n).iter().map(Vec::len).collect()
}

/// `Φ * Θ = Θ * Φ` for all basis `Φ ∈ E¹`, `Θ ∈ E²`. Since `E³` is one-dimensional,
/// this is graded symmetry of `E(B)`, the Calabi-Yau criterion in the Koszul case.
pub fn graded_symmetry_check(m: &RatMatrix, d: &DerivationSpec) -> Result<bool> {
    let basis = yoneda_basis(d.n());
    for phi in &basis[1] {
        for theta in &basis[2] {
            if yoneda_mul(phi, theta, m, d)? != yoneda_mul(theta, phi, m, d)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Matrix of the pairing `E¹ × E² → E³ ≅ k` in the graded basis.
pub fn pairing_matrix(m: &RatMatrix, d: &DerivationSpec) -> Result<RatMatrix> {
    let basis = yoneda_basis(d.n());
    let size = basis[1].len();
    let mut out = RatMatrix::zeros(size, size);
    for (i, phi) in basis[1].iter().enumerate() {
        for (j, theta) in basis[2].iter().enumerate() {
            out.set(i, j, yoneda_mul(phi, theta, m, d)?.top_coefficient().clone());
        }
    }
    Ok(out)
}

/// Basis triples `(i, j, k)` (indices into the flattened graded basis) where
/// `(u v) w ≠ u (v w)`.
pub fn associativity_failures(m: &RatMatrix, d: &DerivationSpec) -> Result<Vec<(usize, usize, usize)>> {
    let flat: Vec<YonedaElement> = yoneda_basis(d.n()).into_iter().flatten().collect();
    let mut bad = Vec::new();
    for (i, u) in flat.iter().enumerate() {
        for (j, v) in flat.iter().enumerate() {
            let uv = yoneda_mul(u, v, m, d)?;
            for (k, w) in flat.iter().enumerate() {
                let left = yoneda_mul(&uv, w, m, d)?;
                let right = yoneda_mul(u, &yoneda_mul(v, w, m, d)?, m, d)?;
                if left != right {
                    bad.push((i, j, k));
                }
            }
        }
    }
    Ok(bad)
}

/// Product on the trivial extension `A! ⊕ I` with `I = ε A!(-1)`:
/// `(a, b)(a', b') = (a a', ε(a) b' + b a')`.
pub fn trivial_extension_mul(u: &YonedaElement, v: &YonedaElement, m: &RatMatrix) -> Result<YonedaElement> {
    let first = koszul_dual_mul(&u.first, &v.first, m)?;
    let left = koszul_dual_mul(&u.first.epsilon(), &v.second, m)?;
    let right = koszul_dual_mul(&u.second, &v.first, m)?;
    Ok(YonedaElement { first, second: left.add(&right) })
}

/// Outcome of comparing the Yoneda product with the trivial-extension product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrivialExtensionReport {
    /// Flattened basis index pairs on which the two products differ.
    pub mismatches: Vec<(usize, usize)>,
    /// For each mismatch, Yoneda product minus trivial-extension product.
    pub differences: Vec<YonedaElement>,
}

impl TrivialExtensionReport {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares the two products on every pair of graded basis elements, with
/// `E(B)` and `A! ⊕ I` identified through `(first, second)`.
///
/// The products differ exactly by the term `-(β⊗α)∘δ` on `E¹ × E¹`, so the
/// comparison succeeds if and only if that correction vanishes.
pub fn trivial_extension_check(m: &RatMatrix, d: &DerivationSpec) -> Result<TrivialExtensionReport> {
    let flat: Vec<YonedaElement> = yoneda_basis(d.n()).into_iter().flatten().collect();
    let mut report = TrivialExtensionReport { mismatches: Vec::new(), differences: Vec::new() };
    let minus = -Rational::one();
    for (i, u) in flat.iter().enumerate() {
        for (j, v) in flat.iter().enumerate() {
            let y = yoneda_mul(u, v, m, d)?;
            let t = trivial_extension_mul(u, v, m)?;
            if y != t {
                report.mismatches.push((i, j));
                report.differences.push(y.add(&t.scale(&minus)));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::quadratic::AntiSymMatrix;
    use crate::tensoralg::rat;

    fn std2() -> RatMatrix {
        AntiSymMatrix::standard(2).unwrap().matrix().clone()
    }

    #[test]
    fn dual_products_n2() {
        let m = std2();
        let x = KoszulDualElement::dual_basis(2, 0);
        let y = KoszulDualElement::dual_basis(2, 1);
        assert_eq!(koszul_dual_mul(&x, &y, &m).unwrap(), KoszulDualElement::top(2, rat(1)));
        assert_eq!(koszul_dual_mul(&y, &x, &m).unwrap(), KoszulDualElement::top(2, rat(-1)));
        assert!(koszul_dual_mul(&x, &x, &m).unwrap().is_zero());
        let top = KoszulDualElement::top(2, rat(1));
        assert!(koszul_dual_mul(&top, &x, &m).unwrap().is_zero());
        assert_eq!(koszul_dual_mul(&KoszulDualElement::unit(2), &y, &m).unwrap(), y);
    }

    #[test]
    fn degrees() {
        assert_eq!(KoszulDualElement::unit(2).degree(), Some(0));
        assert_eq!(KoszulDualElement::dual_basis(2, 1).degree(), Some(1));
        assert_eq!(KoszulDualElement::unit(2).add(&KoszulDualElement::top(2, rat(1))).degree(), None);
        assert_eq!(yoneda_dims(6), vec![1, 7, 7, 1]);
        for (d, part) in yoneda_basis(3).iter().enumerate() {
            assert!(part.iter().all(|e| e.degree() == Some(d)));
        }
    }

    #[test]
    fn correction_for_two_generator_example() {
        // δ(x) = x² + y², δ(y) = x² - xy - yx: the x⊗y coefficients are 0 and -1
        let f = fixtures::twogen(rat(1), rat(1), rat(1));
        let xs = vec![rat(1), rat(0)];
        let ys = vec![rat(0), rat(1)];
        assert_eq!(correction_functional(&xs, &ys, &f.derivation), vec![rat(0), rat(-1)]);
        let m = f.presentation.matrix.matrix();
        let prod = yoneda_mul(
            &YonedaElement::degree_one(xs.clone(), rat(0)),
            &YonedaElement::degree_one(ys.clone(), rat(0)),
            m,
            &f.derivation,
        )
        .unwrap();
        assert_eq!(prod, YonedaElement::degree_two(rat(1), vec![rat(0), rat(1)]));
    }

    #[test]
    fn mixed_products_agree() {
        let f = fixtures::twogen(rat(1), rat(1), rat(1));
        let m = f.presentation.matrix.matrix();
        let phi = YonedaElement::degree_one(vec![rat(2), rat(-1)], rat(3));
        let theta = YonedaElement::degree_two(rat(1), vec![rat(1), rat(4)]);
        let a = yoneda_mul(&phi, &theta, m, &f.derivation).unwrap();
        let b = yoneda_mul(&theta, &phi, m, &f.derivation).unwrap();
        assert_eq!(a, b);
        // ck + βᵗMα = 3 + (1, 4)M(2, -1)ᵗ = 3 + (1·(-1) - 4·2) = -6
        assert_eq!(a, YonedaElement::degree_three(2, rat(-6)));
    }

    #[test]
    fn unit_is_neutral() {
        let f = fixtures::smith();
        let m = f.presentation.matrix.matrix();
        let one = YonedaElement::unit(6);
        for part in yoneda_basis(6) {
            for e in part {
                assert_eq!(yoneda_mul(&one, &e, m, &f.derivation).unwrap(), e);
                assert_eq!(yoneda_mul(&e, &one, m, &f.derivation).unwrap(), e);
            }
        }
    }

    #[test]
    fn symmetry_and_pairing() {
        for f in [fixtures::smith(), fixtures::twogen(rat(1), rat(1), rat(1))] {
            let m = f.presentation.matrix.matrix();
            assert!(graded_symmetry_check(m, &f.derivation).unwrap());
            assert_eq!(pairing_matrix(m, &f.derivation).unwrap().rank(), f.presentation.n() + 1);
        }
    }

    #[test]
    fn symmetry_fails_without_anti_symmetry() {
        let f = fixtures::twogen(rat(1), rat(1), rat(1));
        let m = RatMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert!(!graded_symmetry_check(&m, &f.derivation).unwrap());
    }

    #[test]
    fn associativity_on_examples() {
        for f in [fixtures::smith(), fixtures::twogen(rat(1), rat(1), rat(1))] {
            let m = f.presentation.matrix.matrix();
            assert!(associativity_failures(m, &f.derivation).unwrap().is_empty());
        }
    }

    #[test]
    fn associativity_needs_delta_r_zero() {
        // δ(y) = xy has δ(r) = x r ≠ 0
        let f = fixtures::polynomial_extension(2);
        let mut d = DerivationSpec::zero(2);
        d.set(1, 0, 1, rat(1));
        assert!(!associativity_failures(f.presentation.matrix.matrix(), &d).unwrap().is_empty());
    }

    #[test]
    fn trivial_extension_zero_derivation() {
        let f = fixtures::polynomial_extension(2);
        let report = trivial_extension_check(f.presentation.matrix.matrix(), &f.derivation).unwrap();
        assert!(report.holds());
    }

    #[test]
    fn trivial_extension_obstruction_is_the_correction() {
        let f = fixtures::twogen(rat(1), rat(1), rat(1));
        let m = f.presentation.matrix.matrix();
        let report = trivial_extension_check(m, &f.derivation).unwrap();
        assert!(!report.holds());
        let flat: Vec<YonedaElement> = yoneda_basis(2).into_iter().flatten().collect();
        for ((i, j), diff) in report.mismatches.iter().zip(&report.differences) {
            assert_eq!(flat[*i].degree(), Some(1));
            assert_eq!(flat[*j].degree(), Some(1));
            let beta = &flat[*i].first.v;
            let alpha = &flat[*j].first.v;
            let corr: Vec<Rational> = correction_functional(beta, alpha, &f.derivation).iter().map(|c| -c).collect();
            assert_eq!(diff, &YonedaElement::degree_two(rat(0), corr));
        }
    }
}
