use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::gb::TruncatedGb;
use crate::error::{Error, Result};
use crate::tensoralg::Rational;

/// Dimensions `h_0..h_N` of a graded algebra, optionally with a rational
/// closed form `numerator / denominator`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertData {
    pub coeffs: Vec<u64>,
    pub closed_form: Option<(Vec<i64>, Vec<i64>)>,
}

impl HilbertData {
    pub fn new(coeffs: Vec<u64>) -> Self {
        HilbertData { coeffs, closed_form: None }
    }

    pub fn with_closed_form(mut self, num: Vec<i64>, den: Vec<i64>) -> Self {
        self.closed_form = Some((num, den));
        self
    }

    /// Highest degree covered.
    pub fn bound(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Whether the attached closed form (if any) expands to `coeffs`.
    pub fn consistent(&self) -> bool {
        match &self.closed_form {
            None => true,
            Some((num, den)) => closed_form_check(self, num, den),
        }
    }
}

/// `h_k` = number of normal words of degree `k`, for `k ≤ N`.
pub fn hilbert_coeffs(gb: &TruncatedGb) -> HilbertData {
    HilbertData::new(gb.normal_word_counts())
}

/// First `len` power-series coefficients of `num / den`. `None` if `den(0) = 0`.
pub fn series_expansion(num: &[i64], den: &[i64], len: usize) -> Option<Vec<Rational>> {
    let d0 = den.first().copied().filter(|&c| c != 0)?;
    let d0 = Rational::from_integer(BigInt::from(d0));
    let mut out: Vec<Rational> = Vec::with_capacity(len);
    for k in 0..len {
        let mut acc = num.get(k).map(|&c| Rational::from_integer(BigInt::from(c))).unwrap_or_else(Rational::zero);
        for j in 1..=k.min(den.len().saturating_sub(1)) {
            acc -= Rational::from_integer(BigInt::from(den[j])) * &out[k - j];
        }
        out.push(acc / &d0);
    }
    Some(out)
}

/// Coefficientwise comparison of `h` against the expansion of `num / den`.
pub fn closed_form_check(h: &HilbertData, num: &[i64], den: &[i64]) -> bool {
    match series_expansion(num, den, h.coeffs.len()) {
        None => false,
        Some(exp) => exp.iter().zip(&h.coeffs).all(|(e, &c)| *e == Rational::from_integer(BigInt::from(c))),
    }
}

/// Product of two power series truncated to `len` terms.
pub fn series_mul(a: &[Rational], b: &[Rational], len: usize) -> Vec<Rational> {
    (0..len)
        .map(|k| {
            let mut acc = Rational::zero();
            for i in 0..=k {
                if let (Some(x), Some(y)) = (a.get(i), b.get(k - i)) {
                    acc += x * y;
                }
            }
            acc
        })
        .collect()
}

pub fn as_series(h: &HilbertData) -> Vec<Rational> {
    h.coeffs.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect()
}

/// Denominator `1 - (n+1)t + (n+1)t² - t³` of the Hilbert series of the Ore extension.
pub fn ore_denominator(n: usize) -> Vec<i64> {
    let m = n as i64 + 1;
    vec![1, -m, m, -1]
}

/// Denominator `1 - n t + t²` of the Hilbert series of the base algebra.
pub fn base_denominator(n: usize) -> Vec<i64> {
    vec![1, -(n as i64), 1]
}

/// `h_k = (n+1)(h_{k-1} - h_{k-2}) + h_{k-3}` with `h_0 = 1` and zero before.
pub fn ore_recurrence(n: usize, len: usize) -> Vec<i128> {
    let m = n as i128 + 1;
    let mut h: Vec<i128> = Vec::with_capacity(len);
    for k in 0..len {
        let at = |j: isize| if j < 0 { 0 } else { h[j as usize] };
        let k = k as isize;
        let v = if k == 0 { 1 } else { m * (at(k - 1) - at(k - 2)) + at(k - 3) };
        h.push(v);
    }
    h
}

/// `h_k = n h_{k-1} - h_{k-2}` with `h_0 = 1` and zero before.
pub fn base_recurrence(n: usize, len: usize) -> Vec<i128> {
    let mut h: Vec<i128> = Vec::with_capacity(len);
    for k in 0..len {
        let at = |j: isize| if j < 0 { 0 } else { h[j as usize] };
        let k = k as isize;
        let v = if k == 0 { 1 } else { n as i128 * at(k - 1) - at(k - 2) };
        h.push(v);
    }
    h
}

/// Component dimensions of the Beilinson algebra: `[[1, h1, h2], [0, 1, h1], [0, 0, 1]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BeilinsonGrid {
    pub grid: [[u64; 3]; 3],
}

impl BeilinsonGrid {
    pub fn total(&self) -> u64 {
        self.grid.iter().flatten().sum()
    }
}

pub fn beilinson_dims(h: &HilbertData) -> Result<BeilinsonGrid> {
    if h.coeffs.len() < 3 {
        return Err(Error::Insufficient(format!(
            "Beilinson dimensions need h_0..h_2, got {} coefficient(s)",
            h.coeffs.len()
        )));
    }
    let (h1, h2) = (h.coeffs[1], h.coeffs[2]);
    Ok(BeilinsonGrid { grid: [[1, h1, h2], [0, 1, h1], [0, 0, 1]] })
}

/// Converts an exact series to integer coefficients when possible.
pub fn to_integers(series: &[Rational]) -> Option<Vec<i128>> {
    series.iter().map(|c| if c.is_integer() { c.to_integer().to_i128() } else { None }).collect()
}
