use num_bigint::BigInt;

use super::gb::{complete_gb, NormalFormCache};
use super::hilbert::{as_series, series_expansion, series_mul, HilbertData};
use crate::derivation::transport_presentation;
use crate::error::Result;
use crate::quadratic::{coherence_precondition, symplectic_relabel, CoherencePreconditionFailure};
use crate::superpotential::{ore_presentation, span_rank, OrePresentation};
use crate::tensoralg::{NcPoly, Rational, Word};

/// Default completion bound: 6 for `n ≤ 4`, 4 beyond.
pub fn default_bound(n: usize) -> usize {
    if n <= 4 {
        6
    } else {
        4
    }
}

/// Numerical and structural witnesses for coherence of the Ore extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoherenceWitnesses {
    /// 0-based generator moved to the last position (`n - 1` when no relabeling was needed).
    pub distinguished_index: usize,
    pub bound: usize,
    /// Dimensions of `B/I` with `I = ⟨x_1, .., x_{n-1}⟩`.
    pub quotient_dims: Vec<u64>,
    pub quotient_dims_ok: bool,
    /// `z x_n - x_n z` reduces to zero modulo `I`.
    pub images_commute: bool,
    /// `H_B - H_{B/I}` coefficientwise.
    pub ideal_dims: Vec<Rational>,
    /// `H_B · ((n-1)t - t²)/(1-t)` coefficientwise.
    pub predicted_ideal_dims: Vec<Rational>,
    pub hilbert_identity_ok: bool,
    /// `x_1 x_n - x_n x_1 + Σ (x_i x_{n+1-i} - x_{n+1-i} x_i)` reduces to zero in `B`.
    pub expansion_reduces: bool,
    /// `x_1 x_n` lies in the degree-2 part of the left ideal `B·L`, `L = span{x_1, .., x_{n-1}}`.
    pub left_ideal_membership: bool,
}

impl CoherenceWitnesses {
    pub fn holds(&self) -> bool {
        self.quotient_dims_ok
            && self.images_commute
            && self.hilbert_identity_ok
            && self.expansion_reduces
            && self.left_ideal_membership
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoherenceReport {
    /// `dim V = 2`: the extension is Noetherian and no witnesses are needed.
    Noetherian,
    PreconditionFailed(CoherencePreconditionFailure),
    Witnesses(CoherenceWitnesses),
}

impl CoherenceReport {
    /// True for the Noetherian case and for passing witnesses.
    pub fn holds(&self) -> bool {
        match self {
            CoherenceReport::Noetherian => true,
            CoherenceReport::PreconditionFailed(_) => false,
            CoherenceReport::Witnesses(w) => w.holds(),
        }
    }
}

/// Checks the coherence witnesses through degree `bound`.
///
/// Requires `M` standard and some `j` with `k^i_{jj} = 0` for every `i`. When the
/// largest such `j` is not the last generator, the presentation is relabeled by a
/// signed permutation preserving the standard matrix.
pub fn coherence_witness_check(ore: &OrePresentation, bound: usize) -> Result<CoherenceReport> {
    let n = ore.n();
    if n == 2 {
        return Ok(CoherenceReport::Noetherian);
    }
    let j = match coherence_precondition(&ore.base.matrix, &ore.derivation) {
        Ok(j) => j,
        Err(f) => return Ok(CoherenceReport::PreconditionFailed(f)),
    };
    let relabeled;
    let ore = if j == n - 1 {
        ore
    } else {
        let p = symplectic_relabel(n, j)?;
        let (pres, d) = transport_presentation(&ore.base, &ore.derivation, &p)?;
        relabeled = ore_presentation(&pres, &d, ore.gens_hat.name(n))?;
        &relabeled
    };
    let nv = n + 1;
    let (xn, z) = (n - 1, n);
    let var = |i: usize| NcPoly::var(nv, i);

    let gb_b = complete_gb(nv, &ore.relations, bound)?;
    let h_b = HilbertData::new(gb_b.normal_word_counts());

    let mut quotient_rels = ore.relations.clone();
    quotient_rels.extend((0..n - 1).map(var));
    let gb_q = complete_gb(nv, &quotient_rels, bound)?;
    let quotient_dims = gb_q.normal_word_counts();
    let quotient_dims_ok = quotient_dims.iter().enumerate().all(|(k, &h)| h == k as u64 + 1);
    let commutator = &(&var(z) * &var(xn)) - &(&var(xn) * &var(z));
    let images_commute = bound < 2 || gb_q.normal_form(&commutator)?.is_zero();

    let len = bound + 1;
    let ideal_dims: Vec<Rational> = h_b
        .coeffs
        .iter()
        .zip(&quotient_dims)
        .map(|(&a, &b)| Rational::from_integer(BigInt::from(a) - BigInt::from(b)))
        .collect();
    let h_w = series_expansion(&[0, n as i64 - 1, -1], &[1, -1], len).expect("unit constant term");
    let predicted_ideal_dims = series_mul(&as_series(&h_b), &h_w, len);
    let hilbert_identity_ok = ideal_dims == predicted_ideal_dims;

    let (expansion_reduces, left_ideal_membership) = if bound >= 2 {
        let x1xn = &var(0) * &var(xn);
        let mut expansion = &x1xn - &(&var(xn) * &var(0));
        for i in 1..n / 2 {
            let partner = n - 1 - i;
            expansion = &expansion + &(&(&var(i) * &var(partner)) - &(&var(partner) * &var(i)));
        }
        let expansion_reduces = gb_b.normal_form(&expansion)?.is_zero();

        let mut cache = NormalFormCache::new(&gb_b);
        let mut span: Vec<NcPoly> = Vec::new();
        for a in 0..nv {
            for l in 0..n - 1 {
                span.push(cache.word(&Word::from_indices(&[a, l]))?);
            }
        }
        let base_rank = span_rank(&span, nv)?;
        span.push(cache.poly(&x1xn)?);
        (expansion_reduces, span_rank(&span, nv)? == base_rank)
    } else {
        (true, true)
    };

    Ok(CoherenceReport::Witnesses(CoherenceWitnesses {
        distinguished_index: j,
        bound,
        quotient_dims,
        quotient_dims_ok,
        images_commute,
        ideal_dims,
        predicted_ideal_dims,
        hilbert_identity_ok,
        expansion_reduces,
        left_ideal_membership,
    }))
}

/// `(1 - t)^{-2}` through degree `bound`, the Hilbert series of a polynomial ring in two variables.
pub fn polynomial_plane_series(bound: usize) -> Vec<Rational> {
    (0..=bound).map(|k| Rational::from_integer(BigInt::from(k + 1))).collect::<Vec<_>>()
}
