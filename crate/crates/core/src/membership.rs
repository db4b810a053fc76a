//! Coefficient-growth classification for `F^p` and the radial/Privalov probes.
//!
//! A holomorphic `f = sum a_n z^n` lies in `F^p` exactly when
//! `log^+ |a_n| <= c_n n^{1/(p+1)}` for some `c_n -> 0`. No finite horizon
//! decides an asymptotic statement, so [`classify`] only reports numerical
//! evidence at the horizon it was given.

use serde::{Deserialize, Serialize};

use crate::circle::{default_samples, max_modulus_on, split_circle_mean};
use crate::error::{FpError, Result};
use crate::params::{check_positive, check_radius, Estimate, QuadConfig, SpaceParams};
use crate::series::TruncatedSeries;
use crate::Complex64;

pub const DEFAULT_THRESHOLD: f64 = 0.01;
pub const DEFAULT_NMAX: usize = 1 << 14;

/// Number of dyadic windows `[m/2, m]`, `m = n_max, n_max/2, ...`, fitted by
/// [`classify`].
pub const WINDOWS: usize = 5;

/// Growth factor of the window rate, from the smallest window to the largest,
/// treated as faster than `exp(c n^{1/(p+1)})` growth.
const ACCELERATION: f64 = 2.0;

/// A coefficient sequence given in closed form, evaluated in log space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoefficientRule {
    /// Explicit moduli `|a_0|, |a_1|, ...`; zero past the end of the table.
    PowerTable { table: Vec<f64> },
    /// `a_n = rho^n`.
    Geometric { rho: f64 },
    /// `a_n = exp(eps n^beta)`.
    StretchedExp { eps: f64, beta: f64 },
    /// `a_n = exp(n^beta / log(n + 2))`.
    StretchedExpDamped { beta: f64 },
    Custom { rule: CustomRule },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum CustomRule {
    /// `a_n = (n + 1)^exponent`.
    PowerLaw { exponent: f64 },
    /// `a_n = exp(log(n + 1)^2)`.
    ExpLogSquared,
    /// `a_n = factor * b_n`.
    Scaled { factor: f64, base: Box<CoefficientRule> },
}

impl CoefficientRule {
    pub fn validate(&self) -> Result<()> {
        let beta_ok = |b: f64| b > 0.0 && b < 1.0;
        match self {
            CoefficientRule::PowerTable { table } => {
                if table.is_empty() || table.iter().any(|a| !a.is_finite() || *a < 0.0) {
                    return Err(FpError::param("power table must hold finite nonnegative moduli"));
                }
            }
            CoefficientRule::Geometric { rho } => check_positive("rho", *rho)?,
            CoefficientRule::StretchedExp { eps, beta } => {
                if !eps.is_finite() || !beta_ok(*beta) {
                    return Err(FpError::param(format!(
                        "stretched exponential needs finite eps and beta in (0,1), got eps = {eps}, beta = {beta}"
                    )));
                }
            }
            CoefficientRule::StretchedExpDamped { beta } => {
                if !beta_ok(*beta) {
                    return Err(FpError::param(format!("beta = {beta} must lie in (0,1)")));
                }
            }
            CoefficientRule::Custom { rule } => match rule {
                CustomRule::PowerLaw { exponent } if !exponent.is_finite() => {
                    return Err(FpError::param("power-law exponent must be finite"));
                }
                CustomRule::Scaled { factor, base } => {
                    check_positive("factor", *factor)?;
                    base.validate()?;
                }
                _ => {}
            },
        }
        Ok(())
    }

    /// `log |a_n|` (`-inf` for a zero coefficient).
    pub fn log_abs(&self, n: usize) -> f64 {
        let x = n as f64;
        match self {
            CoefficientRule::PowerTable { table } => table.get(n).map_or(f64::NEG_INFINITY, |a| a.ln()),
            CoefficientRule::Geometric { rho } => x * rho.ln(),
            CoefficientRule::StretchedExp { eps, beta } => eps * x.powf(*beta),
            CoefficientRule::StretchedExpDamped { beta } => x.powf(*beta) / (x + 2.0).ln(),
            CoefficientRule::Custom { rule } => match rule {
                CustomRule::PowerLaw { exponent } => exponent * (x + 1.0).ln(),
                CustomRule::ExpLogSquared => (x + 1.0).ln().powi(2),
                CustomRule::Scaled { factor, base } => factor.ln() + base.log_abs(n),
            },
        }
    }

    pub fn abs(&self, n: usize) -> f64 {
        self.log_abs(n).exp()
    }

    /// The rule multiplied by a positive constant.
    pub fn scaled(&self, factor: f64) -> Self {
        CoefficientRule::Custom {
            rule: CustomRule::Scaled {
                factor,
                base: Box::new(self.clone()),
            },
        }
    }

    /// The truncation `sum_{n <= degree} a_n z^n`; fails if some `a_n`
    /// overflows.
    pub fn to_series(&self, degree: usize) -> Result<TruncatedSeries> {
        self.validate()?;
        let coeffs = (0..=degree)
            .map(|n| Complex64::new(self.abs(n), 0.0))
            .collect();
        TruncatedSeries::new(coeffs)
            .map_err(|_| FpError::InvalidSeries(format!("coefficients overflow below degree {degree}")))
    }
}

/// `s_n = log^+ |a_n| / n^{1/(p+1)}` for `n = 1..=n_max` (index `n - 1`).
pub fn growth_profile(rule: &CoefficientRule, sp: SpaceParams, n_max: usize) -> Result<Vec<f64>> {
    rule.validate()?;
    if n_max < 16 {
        return Err(FpError::param(format!("n_max = {n_max} must be at least 16")));
    }
    let alpha = sp.alpha();
    Ok((1..=n_max)
        .map(|n| rule.log_abs(n).max(0.0) / (n as f64).powf(alpha))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    InFp,
    NotInFp,
    Inconclusive,
}

/// Least-squares growth rate of `log^+ |a_n|` against `n^{1/(p+1)}` on
/// `start..=end`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowRate {
    pub start: usize,
    pub end: usize,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipVerdict {
    pub verdict: Verdict,
    pub limsup_estimate: f64,
    pub threshold: f64,
    /// Index range `[first, last]` the evidence was drawn from.
    pub evidence_window: (usize, usize),
    /// Window rates, ordered from the smallest window to `[n_max/2, n_max]`.
    pub window_rates: Vec<WindowRate>,
    /// `s_n` for `n = 1..=n_max`.
    pub profile: Vec<f64>,
    pub note: String,
}

/// Classifies `rule` against the coefficient criterion at horizon `n_max`.
///
/// On each window `[m/2, m]`, `m = n_max / 2^j`, the slope of `log^+ |a_n|`
/// against `n^{1/(p+1)}` estimates the local `c_n` with additive constants
/// (a scalar factor on the rule) removed. Rates growing by more than
/// `threshold` and doubling across the windows mean faster than
/// `exp(c n^{1/(p+1)})` growth. Otherwise the rates are extrapolated to `n = inf` by a quadratic
/// fit in `1 / log m`, which is the natural scale of slowly vanishing rates
/// such as `1 / log n`.
pub fn classify(
    rule: &CoefficientRule,
    sp: SpaceParams,
    n_max: usize,
    threshold: f64,
) -> Result<MembershipVerdict> {
    check_positive("threshold", threshold)?;
    if n_max < 256 {
        return Err(FpError::param(format!("n_max = {n_max} must be at least 256")));
    }
    let profile = growth_profile(rule, sp, n_max)?;
    let alpha = sp.alpha();

    let mut window_rates: Vec<WindowRate> = (0..WINDOWS)
        .map(|j| {
            let end = n_max >> j;
            let start = end / 2;
            let rate = slope((start..=end).map(|n| {
                ((n as f64).powf(alpha), profile[n - 1] * (n as f64).powf(alpha))
            }));
            WindowRate { start, end, rate }
        })
        .collect();
    window_rates.reverse();
    let rates: Vec<f64> = window_rates.iter().map(|w| w.rate).collect();
    let first = rates[0];
    let last = rates[WINDOWS - 1];
    let min_rate = rates.iter().copied().fold(f64::INFINITY, f64::min);

    let accelerating = last - first > threshold && last >= ACCELERATION * first.max(0.0);
    let (verdict, limsup_estimate) = if accelerating && last >= threshold {
        (Verdict::NotInFp, last)
    } else {
        let ts: Vec<f64> = window_rates
            .iter()
            .map(|w| 1.0 / (w.end as f64 / std::f64::consts::SQRT_2).ln())
            .collect();
        let limit = quadratic_intercept(&ts, &rates).max(0.0);
        if limit <= threshold {
            (Verdict::InFp, limit)
        } else if min_rate >= threshold {
            (Verdict::NotInFp, limit)
        } else {
            (Verdict::Inconclusive, limit)
        }
    };

    Ok(MembershipVerdict {
        verdict,
        limsup_estimate,
        threshold,
        evidence_window: (window_rates[0].start, n_max),
        window_rates,
        profile,
        note: format!("numerical evidence at horizon n_max = {n_max}, not a proof"),
    })
}

fn slope(points: impl Iterator<Item = (f64, f64)> + Clone) -> f64 {
    let (mut n, mut sx, mut sy) = (0.0, 0.0, 0.0);
    for (x, y) in points.clone() {
        n += 1.0;
        sx += x;
        sy += y;
    }
    let (mx, my) = (sx / n, sy / n);
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (x, y) in points {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    sxy / sxx
}

/// Value at `t = 0` of the least-squares parabola through `(ts, ys)`.
fn quadratic_intercept(ts: &[f64], ys: &[f64]) -> f64 {
    // fit in s = (t - t0) / h for conditioning, then evaluate at s(0)
    let t0 = ts.iter().sum::<f64>() / ts.len() as f64;
    let h = ts.iter().map(|t| (t - t0).abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut m = [[0.0; 3]; 3];
    let mut b = [0.0; 3];
    for (&t, &y) in ts.iter().zip(ys) {
        let s = (t - t0) / h;
        let basis = [1.0, s, s * s];
        for i in 0..3 {
            b[i] += basis[i] * y;
            for j in 0..3 {
                m[i][j] += basis[i] * basis[j];
            }
        }
    }
    let det = det3(&m);
    let mut coef = [0.0; 3];
    for (k, c) in coef.iter_mut().enumerate() {
        let mut mk = m;
        for i in 0..3 {
            mk[i][k] = b[i];
        }
        *c = det3(&mk) / det;
    }
    let s = -t0 / h;
    coef[0] + coef[1] * s + coef[2] * s * s
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// `(1 - r)^{1/p} log^+ M_inf(r, f)` for each `r` in an increasing grid in
/// `[0, 1)`.
pub fn radial_growth_probe(f: &TruncatedSeries, sp: SpaceParams, r_grid: &[f64]) -> Result<Vec<f64>> {
    for &r in r_grid {
        check_radius(r)?;
    }
    if r_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(FpError::param("radius grid must be strictly increasing"));
    }
    let samples = default_samples(f.degree());
    Ok(r_grid
        .iter()
        .map(|&r| (1.0 - r).powf(1.0 / sp.p()) * max_modulus_on(f, r, samples).value.ln().max(0.0))
        .collect())
}

/// `int (log^+ |f(r e^{i theta})|)^p d theta / 2 pi`.
///
/// The integrand has a kink wherever `|f| = 1`, which stalls the periodic
/// trapezoid rule, so the circle is integrated piecewise between crossings.
pub fn privalov_mean(f: &TruncatedSeries, sp: SpaceParams, r: f64, cfg: &QuadConfig) -> Result<Estimate> {
    check_radius(r)?;
    check_positive("tol", cfg.tol)?;
    let p = sp.p();
    split_circle_mean(f, r, cfg, "Privalov mean", cfg.tol, |w| {
        (0.5 * w.norm_sqr().ln()).max(0.0).powf(p)
    })
}
