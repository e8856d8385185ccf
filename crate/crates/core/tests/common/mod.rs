#![allow(dead_code)]

use cy3_core::derivation::DerivationSpec;
use cy3_core::quadratic::AntiSymMatrix;
use cy3_core::tensoralg::{rat, NcPoly, RatMatrix, Rational, Word};
use num_traits::Zero;
use proptest::prelude::*;
use rand::Rng;

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-4i64..=4, 1i64..=3).prop_map(|(p, q)| Rational::new(p.into(), q.into()))
}

pub fn word(nvars: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..nvars, 0..=max_len).prop_map(|v| Word::from_indices(&v))
}

pub fn poly(nvars: usize, max_len: usize, max_terms: usize) -> impl Strategy<Value = NcPoly> {
    prop::collection::vec((word(nvars, max_len), small_rational()), 0..=max_terms)
        .prop_map(move |terms| NcPoly::from_terms(nvars, terms))
}

pub fn homogeneous_poly(nvars: usize, degree: usize, max_terms: usize) -> impl Strategy<Value = NcPoly> {
    prop::collection::vec((prop::collection::vec(0..nvars, degree), small_rational()), 1..=max_terms)
        .prop_map(move |terms| NcPoly::from_terms(nvars, terms.into_iter().map(|(w, c)| (Word::from_indices(&w), c))))
}

pub fn derivation(n: usize) -> impl Strategy<Value = DerivationSpec> {
    prop::collection::vec(-2i64..=2, n * n * n).prop_map(move |v| {
        let mut d = DerivationSpec::zero(n);
        for i in 0..n {
            for s in 0..n {
                for t in 0..n {
                    d.set(i, s, t, rat(v[(i * n + s) * n + t]));
                }
            }
        }
        d
    })
}

pub fn antisym(n: usize) -> impl Strategy<Value = AntiSymMatrix> {
    prop::collection::vec(-3i64..=3, n * (n.saturating_sub(1)) / 2).prop_map(move |v| {
        let mut m = RatMatrix::zeros(n, n);
        let mut it = v.into_iter();
        for i in 0..n {
            for j in i + 1..n {
                let x = it.next().expect("entry");
                m.set(i, j, rat(x));
                m.set(j, i, rat(-x));
            }
        }
        AntiSymMatrix::new(m).expect("anti-symmetric by construction")
    })
}

pub fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = RatMatrix> {
    prop::collection::vec(-3i64..=3, rows * cols).prop_map(move |v| {
        let rows_v: Vec<Vec<Rational>> = v.chunks(cols).map(|c| c.iter().map(|&x| rat(x)).collect()).collect();
        RatMatrix::from_rows(rows_v).expect("rectangular")
    })
}

/// Random anti-symmetric integer matrix of size `n`, resampled until invertible.
pub fn random_invertible_antisym<R: Rng>(rng: &mut R, n: usize) -> AntiSymMatrix {
    loop {
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                let x: i64 = rng.gen_range(-5..=5);
                m.set(i, j, rat(x));
                m.set(j, i, rat(-x));
            }
        }
        let a = AntiSymMatrix::new(m).expect("anti-symmetric");
        if a.is_invertible() {
            return a;
        }
    }
}

/// Largest `k` such that some `k × k` minor is nonzero.
pub fn rank_by_minors(m: &RatMatrix) -> usize {
    let (r, c) = (m.rows(), m.cols());
    for k in (1..=r.min(c)).rev() {
        for rows in subsets(r, k) {
            for cols in subsets(c, k) {
                let sub: Vec<Vec<Rational>> =
                    rows.iter().map(|&i| cols.iter().map(|&j| m.get(i, j).clone()).collect()).collect();
                if !RatMatrix::from_rows(sub).unwrap().determinant().unwrap().is_zero() {
                    return k;
                }
            }
        }
    }
    0
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}
