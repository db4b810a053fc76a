//! Truncated Taylor series with complex coefficients.
//!
//! A [`TruncatedSeries`] stores `a_0, ..., a_N` and stands for the polynomial
//! `sum a_n z^n`. Arithmetic keeps full precision: a product of degrees
//! `N_f` and `N_g` has degree `N_f + N_g` unless a truncation is requested.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{FpError, Result};

/// Finite complex coefficient vector `a_0 ... a_N`, index = power.
///
/// Serialized as `{"coeffs": [[re, im], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SeriesRepr", into = "SeriesRepr")]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    coeffs: Vec<[f64; 2]>,
}

impl TryFrom<SeriesRepr> for TruncatedSeries {
    type Error = FpError;

    fn try_from(repr: SeriesRepr) -> Result<Self> {
        TruncatedSeries::new(
            repr.coeffs
                .into_iter()
                .map(|[re, im]| Complex64::new(re, im))
                .collect(),
        )
    }
}

impl From<TruncatedSeries> for SeriesRepr {
    fn from(s: TruncatedSeries) -> Self {
        SeriesRepr {
            coeffs: s.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

impl TruncatedSeries {
    /// Builds a series, rejecting empty or non-finite coefficient lists.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(FpError::InvalidSeries(
                "coefficient list must be nonempty (zero series is [0])".into(),
            ));
        }
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(FpError::InvalidSeries(format!(
                "coefficient a_{i} is not finite"
            )));
        }
        Ok(Self { coeffs })
    }

    /// Real coefficients.
    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub(crate) fn from_vec_unchecked(coeffs: Vec<Complex64>) -> Self {
        debug_assert!(!coeffs.is_empty());
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::constant(Complex64::new(0.0, 0.0))
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self { coeffs: vec![c] }
    }

    /// `z^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[n] = Complex64::new(1.0, 0.0);
        Self { coeffs }
    }

    /// `z - lambda`.
    pub fn linear_factor(lambda: Complex64) -> Self {
        Self {
            coeffs: vec![-lambda, Complex64::new(1.0, 0.0)],
        }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Stored degree `N` (length minus one; trailing zeros are kept).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    /// `sum |a_n|`, an upper bound for `|f|` on the closed disk.
    pub fn abs_sum(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    /// `sum |a_n| r^n`, the majorant of `|f|` on `|z| = r`.
    pub fn majorant(&self, r: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * r + c.norm())
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    /// Cauchy product, optionally truncated to degree `trunc`.
    pub fn mul_truncated(&self, other: &Self, trunc: Option<usize>) -> Self {
        let full = self.degree() + other.degree();
        let deg = trunc.map_or(full, |t| t.min(full));
        let mut out = vec![Complex64::new(0.0, 0.0); deg + 1];
        for (i, &a) in self.coeffs.iter().enumerate().take(deg + 1) {
            if a.re == 0.0 && a.im == 0.0 {
                continue;
            }
            let upper = (deg - i + 1).min(other.coeffs.len());
            for (o, &b) in out[i..i + upper].iter_mut().zip(&other.coeffs[..upper]) {
                *o += a * b;
            }
        }
        Self { coeffs: out }
    }

    /// Coefficients of `A` with `f(z) - f(lambda) = A(z)(z - lambda)`.
    ///
    /// `deg A = deg f - 1`; a constant `f` gives `A = [0]`.
    pub fn synthetic_divide(&self, lambda: DiskPoint) -> Self {
        let n = self.degree();
        if n == 0 {
            return Self::zero();
        }
        let l = lambda.value();
        let mut quotient = vec![Complex64::new(0.0, 0.0); n];
        let mut acc = self.coeffs[n];
        quotient[n - 1] = acc;
        for k in (1..n).rev() {
            acc = self.coeffs[k] + l * acc;
            quotient[k - 1] = acc;
        }
        Self { coeffs: quotient }
    }

    /// Drops trailing coefficients below `eps * sum |a_n| r^n` on `|z| = r`.
    ///
    /// Used to size circle grids; the result evaluates to the same values
    /// on `|z| <= r` up to the relative threshold.
    pub(crate) fn effective_degree(&self, r: f64, eps: f64) -> usize {
        let total = self.majorant(r);
        if total == 0.0 {
            return 0;
        }
        let cut = eps * total;
        let mut rn = 1.0;
        let mut last = 0;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.norm() * rn > cut {
                last = n;
            }
            rn *= r;
            if rn == 0.0 {
                break;
            }
        }
        last
    }

    fn zip_with(&self, other: &Self, op: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        let coeffs = (0..len)
            .map(|i| {
                op(
                    *self.coeffs.get(i).unwrap_or(&zero),
                    *other.coeffs.get(i).unwrap_or(&zero),
                )
            })
            .collect();
        Self { coeffs }
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: Self) -> TruncatedSeries {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: Self) -> TruncatedSeries {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: Self) -> TruncatedSeries {
        self.mul_truncated(rhs, None)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|&c| -c).collect(),
        }
    }
}

/// A point of the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct DiskPoint(Complex64);

impl DiskPoint {
    pub fn new(value: Complex64) -> Result<Self> {
        if !value.is_finite() || value.norm() >= 1.0 {
            return Err(FpError::param(format!(
                "lambda = {value} must lie in the open unit disk"
            )));
        }
        Ok(Self(value))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }

    pub fn modulus(self) -> f64 {
        self.0.norm()
    }
}

impl TryFrom<[f64; 2]> for DiskPoint {
    type Error = FpError;
    fn try_from([re, im]: [f64; 2]) -> Result<Self> {
        Self::new(Complex64::new(re, im))
    }
}

impl From<DiskPoint> for [f64; 2] {
    fn from(p: DiskPoint) -> Self {
        [p.0.re, p.0.im]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real(coeffs: &[f64]) -> TruncatedSeries {
        TruncatedSeries::from_real(coeffs).unwrap()
    }

    #[test]
    fn rejects_empty_and_nonfinite() {
        assert!(TruncatedSeries::new(vec![]).is_err());
        assert!(TruncatedSeries::new(vec![c(f64::NAN, 0.0)]).is_err());
        assert!(TruncatedSeries::new(vec![c(1.0, f64::INFINITY)]).is_err());
    }

    #[test]
    fn eval_small_cases() {
        assert_eq!(real(&[1.0, 1.0]).eval(c(0.5, 0.0)), c(1.5, 0.0));
        let v = TruncatedSeries::monomial(2).eval(c(0.0, 0.5));
        assert!((v - c(-0.25, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn ring_operations() {
        let p = real(&[1.0, 1.0]);
        let q = real(&[1.0, -1.0]);
        assert_eq!(&p * &q, real(&[1.0, 0.0, -1.0]));
        assert_eq!(&p * &TruncatedSeries::one(), p);
        assert_eq!(&p + &q, real(&[2.0, 0.0]));
        assert_eq!(&p - &q, real(&[0.0, 2.0]));
        assert_eq!(p.scale(c(0.0, 2.0)), TruncatedSeries::new(vec![c(0.0, 2.0); 2]).unwrap());
        assert_eq!(p.mul_truncated(&q, Some(1)), real(&[1.0, 0.0]));
        assert_eq!(p.mul_truncated(&q, Some(10)).degree(), 2);
    }

    #[test]
    fn synthetic_division_small_cases() {
        let zero = DiskPoint::new(c(0.0, 0.0)).unwrap();
        assert_eq!(TruncatedSeries::monomial(2).synthetic_divide(zero), real(&[0.0, 1.0]));
        let half = DiskPoint::new(c(0.5, 0.0)).unwrap();
        assert_eq!(real(&[1.0, 0.0, 1.0]).synthetic_divide(half), real(&[0.5, 1.0]));
        assert_eq!(real(&[3.0]).synthetic_divide(half), TruncatedSeries::zero());
    }

    #[test]
    fn disk_point_domain() {
        assert!(DiskPoint::new(c(1.0, 0.0)).is_err());
        assert!(DiskPoint::new(c(0.6, 0.8)).is_err());
        assert!(DiskPoint::new(c(0.6, 0.79)).is_ok());
    }

    #[test]
    fn json_format() {
        let s = TruncatedSeries::new(vec![c(1.0, 0.0), c(0.5, -2.0)]).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"coeffs":[[1.0,0.0],[0.5,-2.0]]}"#);
        let back: TruncatedSeries = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<TruncatedSeries>(r#"{"coeffs":[]}"#).is_err());
    }

    #[test]
    fn effective_degree_trims_negligible_tail() {
        let f = real(&[1.0, 1.0, 1.0, 1.0]);
        assert_eq!(f.effective_degree(0.9, 1e-18), 3);
        assert_eq!(f.effective_degree(1e-7, 1e-18), 2);
        assert_eq!(TruncatedSeries::zero().effective_degree(0.5, 1e-18), 0);
    }
}
