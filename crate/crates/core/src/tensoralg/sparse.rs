use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::{RatMatrix, Rational};

/// Sparse vector: strictly increasing indices, no zero entries.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseVec(Vec<(usize, Rational)>);

impl SparseVec {
    pub fn new() -> Self {
        SparseVec(Vec::new())
    }

    /// Sums duplicate indices and drops zeros.
    pub fn from_entries(entries: impl IntoIterator<Item = (usize, Rational)>) -> Self {
        let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
        for (i, v) in entries {
            *acc.entry(i).or_insert_with(Rational::zero) += v;
        }
        SparseVec(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect())
    }

    pub fn entries(&self) -> &[(usize, Rational)] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, i: usize) -> Rational {
        self.0
            .binary_search_by_key(&i, |(k, _)| *k)
            .map(|p| self.0[p].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: &Rational, other: &SparseVec) -> SparseVec {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, c * &b[j].1));
                j += 1;
            } else {
                let v = &a[i].1 + c * &b[j].1;
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        SparseVec(out)
    }

    pub fn scale(&self, c: &Rational) -> SparseVec {
        if c.is_zero() {
            return SparseVec::new();
        }
        SparseVec(self.0.iter().map(|(i, v)| (*i, v * c)).collect())
    }
}

/// Column-stored sparse matrix. Used for the large per-degree maps of the
/// resolution checks, where dense storage would be wasteful.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    cols: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn new(nrows: usize, cols: Vec<SparseVec>) -> Self {
        debug_assert!(cols.iter().all(|c| c.0.last().map_or(true, |(i, _)| *i < nrows)));
        SparseMatrix { nrows, cols }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMatrix { nrows, cols: vec![SparseVec::new(); ncols] }
    }

    pub fn from_dense(m: &RatMatrix) -> Self {
        let cols = (0..m.cols())
            .map(|c| SparseVec::from_entries((0..m.rows()).map(|r| (r, m.get(r, c).clone()))))
            .collect();
        SparseMatrix { nrows: m.rows(), cols }
    }

    pub fn to_dense(&self) -> RatMatrix {
        let mut m = RatMatrix::zeros(self.nrows, self.cols.len());
        for (c, col) in self.cols.iter().enumerate() {
            for (r, v) in col.entries() {
                m.set(*r, c, v.clone());
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(SparseVec::is_zero)
    }

    /// `self * other`, or `None` on a shape mismatch.
    pub fn mul(&self, other: &SparseMatrix) -> Option<SparseMatrix> {
        if self.ncols() != other.nrows {
            return None;
        }
        let cols = other
            .cols
            .iter()
            .map(|col| {
                let mut acc: HashMap<usize, Rational> = HashMap::new();
                for (k, b) in col.entries() {
                    for (i, a) in self.cols[*k].entries() {
                        *acc.entry(*i).or_insert_with(Rational::zero) += a * b;
                    }
                }
                SparseVec::from_entries(acc)
            })
            .collect();
        Some(SparseMatrix { nrows: self.nrows, cols })
    }

    /// Exact rank by incremental echelon reduction of the columns.
    pub fn rank(&self) -> usize {
        let mut pivots: HashMap<usize, SparseVec> = HashMap::new();
        let mut order: Vec<&SparseVec> = self.cols.iter().filter(|c| !c.is_zero()).collect();
        // sparse columns first keeps fill-in down
        order.sort_by_key(|c| c.nnz());
        for col in order {
            let mut v = col.clone();
            while let Some((lead, coef)) = v.0.first().cloned() {
                match pivots.get(&lead) {
                    Some(p) => v = v.axpy(&-coef, p),
                    None => {
                        let inv = Rational::one() / coef;
                        pivots.insert(lead, v.scale(&inv));
                        break;
                    }
                }
            }
        }
        pivots.len()
    }
}
