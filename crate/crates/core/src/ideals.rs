//! Point evaluations `gamma_lambda(f) = f(lambda)`, the closed maximal ideals
//! `M_lambda = {f : f(lambda) = 0}` and the quotient `F^p / M_lambda`, which is
//! one-dimensional: the coset of `f` is determined by the constant `f(lambda)`.

use serde::{Deserialize, Serialize};

use crate::circle::max_modulus;
use crate::error::{FpError, Result};
use crate::params::check_radius;
use crate::series::{DiskPoint, TruncatedSeries};
use crate::Complex64;

/// Default size of the witness family in [`quotient_seminorm_bounds`].
pub const DEFAULT_K_BUDGET: usize = 64;

/// The ideal `M_lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdealHandle {
    pub lambda: DiskPoint,
}

impl IdealHandle {
    pub fn new(lambda: DiskPoint) -> Self {
        Self { lambda }
    }
}

/// `f + M_lambda`, represented by the constant `f(lambda)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Coset {
    #[serde(with = "complex_pair")]
    pub representative: Complex64,
    pub ideal: IdealHandle,
}

/// `f = f(lambda) + A(z) (z - lambda)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CosetDecomposition {
    pub coset: Coset,
    pub quotient: TruncatedSeries,
}

impl CosetDecomposition {
    /// `f(lambda) + A(z) (z - lambda)` multiplied back out, of degree at least one.
    pub fn reconstruct(&self) -> TruncatedSeries {
        let lambda = self.coset.ideal.lambda.value();
        let linear = TruncatedSeries::linear_factor(lambda);
        &self.quotient.mul_truncated(&linear, None) + &TruncatedSeries::constant(self.coset.representative)
    }
}

pub fn point_functional(f: &TruncatedSeries, lambda: DiskPoint) -> Complex64 {
    f.eval(lambda.value())
}

/// Membership test `|f(lambda)| <= tol`; the witness is `f(lambda)`.
pub fn ideal_contains(ideal: IdealHandle, f: &TruncatedSeries, tol: f64) -> Result<(bool, Complex64)> {
    if !(tol >= 0.0) {
        return Err(FpError::param(format!("tol = {tol} must be nonnegative")));
    }
    let value = point_functional(f, ideal.lambda);
    Ok((value.norm() <= tol, value))
}

pub fn coset_of(f: &TruncatedSeries, ideal: IdealHandle) -> CosetDecomposition {
    let quotient = f.synthetic_divide(ideal.lambda);
    CosetDecomposition {
        coset: Coset {
            representative: point_functional(f, ideal.lambda),
            ideal,
        },
        quotient,
    }
}

/// Bracket on `||[f]||_r = inf_{h in M_lambda} max_{|z|=r} |f + h|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuotientBounds {
    pub lower: f64,
    pub upper: f64,
    /// Witness index `k` attaining `upper`: `f + h = f(lambda) (z/lambda)^k`.
    pub witness_k: usize,
}

/// Brackets the quotient seminorm of `f + M_lambda` on `|z| = r`.
///
/// Every `h` in `M_lambda` has `(f + h)(lambda) = f(lambda)`. When `r >= |lambda|`
/// the maximum principle gives `|f(lambda)|` from below; otherwise the lower
/// bound is 0. The witnesses `f + h = f(lambda) (z/lambda)^k`, `0 <= k <= k_budget`
/// (only `k = 0` for `lambda = 0`), give upper bounds `|f(lambda)| (r/|lambda|)^k`.
pub fn quotient_seminorm_bounds(
    f: &TruncatedSeries,
    ideal: IdealHandle,
    r: f64,
    k_budget: usize,
) -> Result<QuotientBounds> {
    check_radius(r)?;
    let value = point_functional(f, ideal.lambda).norm();
    let modulus = ideal.lambda.modulus();
    let lower = if r >= modulus { value } else { 0.0 };
    let mut upper = value;
    let mut witness_k = 0;
    if modulus > 0.0 {
        let ratio = r / modulus;
        let mut candidate = value;
        for k in 1..=k_budget {
            candidate *= ratio;
            if candidate < upper {
                upper = candidate;
                witness_k = k;
            }
        }
    }
    Ok(QuotientBounds {
        lower,
        upper,
        witness_k,
    })
}

/// Max modulus on `|z| = r` of the witness `f(lambda) (z/lambda)^k`,
/// evaluated as an explicit polynomial.
pub fn witness_max_modulus(f: &TruncatedSeries, ideal: IdealHandle, r: f64, k: usize) -> Result<f64> {
    check_radius(r)?;
    let lambda = ideal.lambda.value();
    if k > 0 && lambda == Complex64::new(0.0, 0.0) {
        return Err(FpError::param("witnesses with k > 0 need lambda != 0"));
    }
    let scale = point_functional(f, ideal.lambda) / lambda.powu(k as u32);
    let witness = TruncatedSeries::monomial(k).scale(scale);
    Ok(max_modulus(&witness, r))
}

/// `||[fg]||_r <= ||[f]||_r ||[g]||_r` in the regime `r >= |lambda|`, where the
/// quotient seminorm equals `|(.)(lambda)|`.
pub fn quotient_submultiplicativity_check(
    f: &TruncatedSeries,
    g: &TruncatedSeries,
    ideal: IdealHandle,
    r: f64,
) -> Result<bool> {
    check_radius(r)?;
    if r < ideal.lambda.modulus() {
        return Err(FpError::param(format!(
            "r = {r} must be at least |lambda| = {}",
            ideal.lambda.modulus()
        )));
    }
    let fg = point_functional(&f.mul_truncated(g, None), ideal.lambda).norm();
    let rhs = point_functional(f, ideal.lambda).norm() * point_functional(g, ideal.lambda).norm();
    Ok(fg <= rhs + 1e-12 * rhs.max(1.0))
}

/// `lambda_f = f(lambda)`: `lambda_f - f` lies in `M_lambda`, so it is not
/// invertible modulo `M_lambda`.
pub fn spectral_point(f: &TruncatedSeries, ideal: IdealHandle) -> Complex64 {
    point_functional(f, ideal.lambda)
}

pub(crate) mod complex_pair {
    use num_complex::Complex64;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq([z.re, z.im])
    }
}
