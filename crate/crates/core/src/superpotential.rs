//! The Ore presentation of `B = A[z; δ̄]`, its explicit superpotential, cyclic
//! derivatives, and the Jacobian presentation check.

use num_traits::One;

use crate::derivation::{check_delta_r_in_ideal, check_delta_r_zero, DerivationSpec};
use crate::error::{Error, Result};
use crate::quadratic::QuadraticPresentation;
use crate::tensoralg::{
    apply_left_functional, apply_right_functional, graded_matrix, GeneratorSet, Homogeneity, NcPoly, Rational,
    Word,
};

/// `B = T(V̂)/⟨r, r_1, .., r_n⟩` with `r_i = z x_i - x_i z - δ(x_i)`.
///
/// The Ore variable is stored last (index `n`), so it is the greatest letter
/// in the monomial order used by the normal-form engine.
#[derive(Clone, Debug)]
pub struct OrePresentation {
    pub gens_hat: GeneratorSet,
    pub base: QuadraticPresentation,
    pub derivation: DerivationSpec,
    /// `[r, r_1, .., r_n]` over the `n + 1` letters of `gens_hat`.
    pub relations: Vec<NcPoly>,
}

impl OrePresentation {
    pub fn n(&self) -> usize {
        self.base.n()
    }

    /// Index of the Ore variable in `gens_hat`.
    pub fn z(&self) -> usize {
        self.n()
    }

    pub fn nvars(&self) -> usize {
        self.n() + 1
    }
}

/// Rank of the span of homogeneous polynomials of a common degree.
pub(crate) fn span_rank(polys: &[NcPoly], nvars: usize) -> Result<usize> {
    let degree = match polys.iter().map(NcPoly::homogeneity).find(|h| *h != Homogeneity::Zero) {
        None => return Ok(0),
        Some(Homogeneity::Degree(d)) => d,
        Some(_) => return Err(Error::Inhomogeneous),
    };
    let columns: Vec<(Word, NcPoly)> = polys.iter().map(|p| (Word::empty(), p.clone())).collect();
    Ok(graded_matrix(nvars, &columns, degree, None)?.rank())
}

/// Builds the relations of the Ore extension. Requires `δ(r) ∈ ⟨r⟩`.
pub fn ore_presentation(pres: &QuadraticPresentation, d: &DerivationSpec, z_name: &str) -> Result<OrePresentation> {
    let n = pres.n();
    if d.n() != n {
        return Err(Error::AlphabetMismatch { left: n, right: d.n() });
    }
    if !check_delta_r_in_ideal(d, pres)?.is_member() {
        return Err(Error::Precondition("δ(r) does not lie in ⟨r⟩; δ does not descend to A".into()));
    }
    let gens_hat = pres.gens.with_ore_variable(z_name)?;
    let nv = n + 1;
    let z = NcPoly::var(nv, n);
    let mut relations = vec![pres.relation.embed(nv)];
    for i in 0..n {
        let x = NcPoly::var(nv, i);
        let ri = &(&(&z * &x) - &(&x * &z)) - &d.image(i, nv);
        relations.push(ri);
    }
    let rank = span_rank(&relations, nv)?;
    if rank != n + 1 {
        return Err(Error::DependentRelations { rank, expected: n + 1 });
    }
    Ok(OrePresentation { gens_hat, base: pres.clone(), derivation: d.clone(), relations })
}

/// A degree-3 cyclic element of `V̂^{⊗3}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Superpotential {
    w: NcPoly,
}

impl Superpotential {
    /// Validates degree 3 and `[αw] = [wα]` for every dual basis vector `α`.
    pub fn new(w: NcPoly) -> Result<Self> {
        match w.homogeneity() {
            Homogeneity::Degree(3) | Homogeneity::Zero => {}
            Homogeneity::Degree(d) => return Err(Error::WrongDegree { expected: 3, found: d }),
            Homogeneity::Mixed => return Err(Error::Inhomogeneous),
        }
        if let Some(alpha) = cyclicity_failures(&w)?.first() {
            return Err(Error::Precondition(format!("not cyclic for dual basis vector {alpha}")));
        }
        Ok(Superpotential { w })
    }

    pub fn poly(&self) -> &NcPoly {
        &self.w
    }
}

/// Dual basis indices `α` with `[αw] ≠ [wα]`.
pub fn cyclicity_failures(w: &NcPoly) -> Result<Vec<usize>> {
    let mut bad = Vec::new();
    for alpha in 0..w.nvars() {
        if apply_left_functional(alpha, w)? != apply_right_functional(w, alpha)? {
            bad.push(alpha);
        }
    }
    Ok(bad)
}

/// `w = -z r + Σ_{i,j} m_ij x_i r_j`. Requires `δ(r) = 0`.
pub fn build_superpotential(op: &OrePresentation) -> Result<Superpotential> {
    if !check_delta_r_zero(&op.derivation, &op.base)? {
        return Err(Error::DeltaRNonzero);
    }
    let n = op.n();
    let nv = op.nvars();
    let z = NcPoly::var(nv, op.z());
    let mut w = -(&(&z * &op.relations[0]));
    for i in 0..n {
        let xi = NcPoly::var(nv, i);
        for j in 0..n {
            let m = op.base.matrix.get(i, j);
            if !num_traits::Zero::is_zero(m) {
                w.add_scaled(&(&xi * &op.relations[j + 1]), m);
            }
        }
    }
    Superpotential::new(w)
}

/// `∂_{x_i}(w) = [x_i^* w]`.
pub fn cyclic_partial(w: &Superpotential, i: usize) -> Result<NcPoly> {
    apply_left_functional(i, &w.w)
}

/// Ranks behind the Jacobian presentation check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobianReport {
    pub derivative_rank: usize,
    pub relation_rank: usize,
    pub union_rank: usize,
}

impl JacobianReport {
    /// The two spans coincide.
    pub fn holds(&self) -> bool {
        self.derivative_rank == self.relation_rank && self.relation_rank == self.union_rank
    }
}

/// Compares `span{∂_{x_i}(w)}` with `span{r, r_1, .., r_n}` inside `V̂ ⊗ V̂`.
pub fn jacobian_presentation_check(op: &OrePresentation, w: &Superpotential) -> Result<JacobianReport> {
    let nv = op.nvars();
    let derivs: Vec<NcPoly> = (0..nv).map(|i| cyclic_partial(w, i)).collect::<Result<_>>()?;
    let mut union = derivs.clone();
    union.extend(op.relations.iter().cloned());
    Ok(JacobianReport {
        derivative_rank: span_rank(&derivs, nv)?,
        relation_rank: span_rank(&op.relations, nv)?,
        union_rank: span_rank(&union, nv)?,
    })
}

/// `w = -r z + Σ_{i,j} (Mᵗ)_ij r_i x_j`, the second expansion of the same element.
pub fn rewritten_form(op: &OrePresentation) -> NcPoly {
    let n = op.n();
    let nv = op.nvars();
    let z = NcPoly::var(nv, op.z());
    let mut out = -(&(&op.relations[0] * &z));
    for i in 0..n {
        for j in 0..n {
            // (Mᵗ)_ij = m_ji
            let m = op.base.matrix.get(j, i);
            if !num_traits::Zero::is_zero(m) {
                out.add_scaled(&(&op.relations[i + 1] * &NcPoly::var(nv, j)), m);
            }
        }
    }
    out
}

pub fn rewritten_form_check(op: &OrePresentation, w: &Superpotential) -> bool {
    rewritten_form(op) == w.w
}

/// `Σ_α x_α [x_α^* p]`, which recovers any homogeneous `p` of positive degree.
pub fn dual_basis_reconstruction(p: &NcPoly) -> Result<NcPoly> {
    let nv = p.nvars();
    let mut out = NcPoly::zero(nv);
    for a in 0..nv {
        out.add_scaled(&(&NcPoly::var(nv, a) * &apply_left_functional(a, p)?), &Rational::one());
    }
    Ok(out)
}
