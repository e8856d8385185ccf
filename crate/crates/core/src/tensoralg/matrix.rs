use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{word_index, NcPoly, Rational, Word};
use crate::error::{Error, Result};

/// Dense exact-rational matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(RatMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let data: Vec<Vec<Rational>> = rows
            .iter()
            .map(|row| row.iter().map(|&v| Rational::from_integer(BigInt::from(v))).collect())
            .collect();
        Self::from_rows(data).expect("ragged integer matrix")
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, s: &Rational) -> RatMatrix {
        RatMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn try_mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!("{} columns vs vector of {}", self.cols, v.len())));
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).fold(Rational::zero(), |acc, (a, b)| acc + a * b))
            .collect())
    }

    /// Exact rank by fraction-free elimination.
    pub fn rank(&self) -> usize {
        bareiss_echelon(&integer_rows(self)).pivots.len()
    }

    /// Exact determinant of a square matrix.
    pub fn determinant(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        if self.rows == 0 {
            return Ok(Rational::one());
        }
        // row scaling factors are divided back out at the end
        let mut scale = BigInt::one();
        let mut rows = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let (row, den) = clear_denominators(self.row(r));
            scale *= den;
            rows.push(row);
        }
        let ech = bareiss_echelon(&rows);
        if ech.pivots.len() < self.rows {
            return Ok(Rational::zero());
        }
        let last = ech.rows[self.rows - 1][self.cols - 1].clone();
        let det = if ech.swaps % 2 == 1 { -last } else { last };
        Ok(Rational::new(det, scale))
    }

    /// Inverse by Gauss–Jordan elimination over the rationals.
    pub fn inverse(&self) -> Result<RatMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.to_rows();
        let mut inv = RatMatrix::identity(n).to_rows();
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero()).ok_or(Error::Singular)?;
            a.swap(p, c);
            inv.swap(p, c);
            let piv = a[c][c].clone();
            for j in 0..n {
                a[c][j] = &a[c][j] / &piv;
                inv[c][j] = &inv[c][j] / &piv;
            }
            for r in 0..n {
                if r == c || a[r][c].is_zero() {
                    continue;
                }
                let f = a[r][c].clone();
                for j in 0..n {
                    let (ac, ic) = (a[c][j].clone(), inv[c][j].clone());
                    a[r][j] -= &f * ac;
                    inv[r][j] -= &f * ic;
                }
            }
        }
        RatMatrix::from_rows(inv)
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j) == &-self.get(j, i).clone()))
    }
}

impl Mul for &RatMatrix {
    type Output = RatMatrix;

    fn mul(self, rhs: &RatMatrix) -> RatMatrix {
        self.try_mul(rhs).expect("matrix dimension mismatch")
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Outcome of a linear solve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    /// One solution `x` of `A x = b` (free variables set to zero).
    Consistent(Vec<Rational>),
    /// A vector `y` with `yᵀA = 0` and `yᵀb = 1`, certifying there is no solution.
    Inconsistent(Vec<Rational>),
}

/// Exact rank of `a`, and when `b` is given either a solution of `a x = b`
/// or a certificate that none exists.
pub fn rank_and_solve(a: &RatMatrix, b: Option<&[Rational]>) -> Result<(usize, Option<Solution>)> {
    let rank = a.rank();
    let Some(b) = b else {
        return Ok((rank, None));
    };
    if b.len() != a.rows {
        return Err(Error::DimensionMismatch(format!("{} rows vs right-hand side of {}", a.rows, b.len())));
    }
    if let Some(x) = solve_particular(a, b) {
        return Ok((rank, Some(Solution::Consistent(x))));
    }
    // Fredholm alternative: [Aᵀ; bᵀ] y = (0, .., 0, 1) is solvable exactly when A x = b is not.
    let mut rows = a.transpose().to_rows();
    rows.push(b.to_vec());
    let dual = RatMatrix::from_rows(rows)?;
    let mut rhs = vec![Rational::zero(); a.cols + 1];
    rhs[a.cols] = Rational::one();
    let y = solve_particular(&dual, &rhs).expect("Fredholm alternative violated");
    Ok((rank, Some(Solution::Inconsistent(y))))
}

fn solve_particular(a: &RatMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.cols;
    let rows: Vec<Vec<BigInt>> = (0..a.rows)
        .map(|r| {
            let mut row = a.row(r).to_vec();
            row.push(b[r].clone());
            clear_denominators(&row).0
        })
        .collect();
    let ech = bareiss_echelon(&rows);
    if ech.pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &pc) in ech.pivots.iter().enumerate().rev() {
        let row = &ech.rows[i];
        let mut acc = Rational::from_integer(row[n].clone());
        for j in pc + 1..n {
            if !row[j].is_zero() {
                acc -= Rational::from_integer(row[j].clone()) * &x[j];
            }
        }
        x[pc] = acc / Rational::from_integer(row[pc].clone());
    }
    Some(x)
}

struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    swaps: usize,
}

/// Fraction-free (Bareiss) forward elimination. Every division is exact.
fn bareiss_echelon(input: &[Vec<BigInt>]) -> Echelon {
    let mut m: Vec<Vec<BigInt>> = input.to_vec();
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut swaps = 0;
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            m.swap(p, r);
            swaps += 1;
        }
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let piv = pivot_row[c].clone();
        for row in rest.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..ncols {
                let v = &piv * &row[j] - &lead * &pivot_row[j];
                row[j] = if prev.is_one() { v } else { v.div_floor(&prev) };
            }
            row[c] = BigInt::zero();
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    Echelon { rows: m, pivots, swaps }
}

fn integer_rows(a: &RatMatrix) -> Vec<Vec<BigInt>> {
    (0..a.rows).map(|r| clear_denominators(a.row(r)).0).collect()
}

/// Scales a rational row to integers by the lcm of its denominators.
fn clear_denominators(row: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints = row.iter().map(|v| v.numer() * (&l / v.denom())).collect();
    (ints, l)
}

/// Matrix of a linear map given by the images of basis elements.
///
/// Column `j` holds the coordinates of `columns[j].1` in `target_basis`
/// (all words of length `degree` over `nvars` letters when `None`). Every
/// source word must share one length and every image must be homogeneous of
/// degree `degree`.
pub fn graded_matrix(
    nvars: usize,
    columns: &[(Word, NcPoly)],
    degree: usize,
    target_basis: Option<&[Word]>,
) -> Result<RatMatrix> {
    if let Some((first, _)) = columns.first() {
        if let Some((w, _)) = columns.iter().find(|(w, _)| w.len() != first.len()) {
            return Err(Error::WrongDegree { expected: first.len(), found: w.len() });
        }
    }
    let index: Option<std::collections::HashMap<&Word, usize>> =
        target_basis.map(|b| b.iter().enumerate().map(|(i, w)| (w, i)).collect());
    let nrows = target_basis.map_or_else(|| nvars.pow(degree as u32), <[Word]>::len);
    let mut m = RatMatrix::zeros(nrows, columns.len());
    for (j, (_, image)) in columns.iter().enumerate() {
        if image.nvars() != nvars {
            return Err(Error::AlphabetMismatch { left: nvars, right: image.nvars() });
        }
        for (w, c) in image.terms() {
            if w.len() != degree {
                return Err(Error::WrongDegree { expected: degree, found: w.len() });
            }
            let row = match &index {
                None => word_index(w, nvars),
                Some(ix) => *ix.get(w).ok_or_else(|| {
                    Error::DimensionMismatch(format!("word {w:?} is not in the target basis"))
                })?,
            };
            m.set(row, j, c.clone());
        }
    }
    Ok(m)
}
