//! Circle functionals: values on equispaced circle grids, the maximum
//! modulus `M_inf(r, f)` and the integral means `M_p(r, f)`.
//!
//! Grid values come from one inverse FFT of the folded coefficients
//! `b_m = sum_{n = m mod K} a_n r^n`, which is exact for any `K` (no
//! aliasing error, only roundoff).

use std::cell::RefCell;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{FpError, Result};
use crate::params::{check_radius, Estimate, QuadConfig};
use crate::quadrature::integrate_vec;
use crate::series::TruncatedSeries;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Relative size below which trailing terms are ignored when sizing grids.
const TAIL_EPS: f64 = 1e-18;

/// Golden-section iterations used to refine a sampled maximum.
const GOLDEN_ITERS: usize = 40;

/// Upper bound on the number of sampled peaks refined by `max_modulus`.
const MAX_REFINED_PEAKS: usize = 8;

/// `f(r e^{2 pi i j / k})` for `j = 0..k`.
pub fn circle_values(f: &TruncatedSeries, r: f64, k: usize) -> Vec<Complex64> {
    assert!(k > 0, "grid size must be positive");
    let mut buf = vec![Complex64::new(0.0, 0.0); k];
    let mut rn = 1.0;
    for (n, &a) in f.coeffs().iter().enumerate() {
        if rn == 0.0 {
            break;
        }
        buf[n % k] += a * rn;
        rn *= r;
    }
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(k));
    fft.process(&mut buf);
    buf
}

/// Default sample count for maximum-modulus scans: `max(4 deg + 4, 256)`.
pub fn default_samples(degree: usize) -> usize {
    (4 * degree + 4).max(256)
}

/// Details of a maximum-modulus estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaxModulus {
    pub value: f64,
    /// Angle at which `value` was attained.
    pub theta: f64,
    pub samples: usize,
    /// Rigorous bound on how far the best raw sample can sit below the true
    /// maximum; the refined `value` is typically far closer.
    pub sampling_bound: f64,
}

/// `max_{|z| = r} |f(z)|` (equal to the closed-disk maximum).
///
/// Panics unless `0 <= r < 1`.
pub fn max_modulus(f: &TruncatedSeries, r: f64) -> f64 {
    max_modulus_detailed(f, r, default_samples(f.degree())).value
}

/// Maximum modulus on `|z| = r` from `samples` equispaced points followed by
/// golden-section refinement around every sampled peak that could still
/// hold the global maximum.
///
/// `|f|^2` is a trigonometric polynomial of degree `N`, so by Bernstein's
/// inequality the best sample is at least `rho * M` with
/// `rho^2 = 1 - (pi N / K)^2 / 4`; peaks below `rho * best` are skipped.
pub fn max_modulus_detailed(f: &TruncatedSeries, r: f64, samples: usize) -> MaxModulus {
    check_radius(r).expect("max_modulus radius");
    max_modulus_on(f, r, samples)
}

pub(crate) fn max_modulus_on(f: &TruncatedSeries, r: f64, samples: usize) -> MaxModulus {
    let k = samples.max(3);
    let n = f.degree() as f64;
    let ratio = PI * n / k as f64;
    let rho = if ratio < 2.0 {
        (1.0 - ratio * ratio / 4.0).sqrt()
    } else {
        0.0
    };
    if f.is_zero() {
        return MaxModulus {
            value: 0.0,
            theta: 0.0,
            samples: k,
            sampling_bound: 0.0,
        };
    }

    let mods: Vec<f64> = circle_values(f, r, k).iter().map(|v| v.norm()).collect();
    let (best_idx, best) = mods
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::MIN), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });

    let mut peaks: Vec<usize> = (0..k)
        .filter(|&i| {
            let prev = mods[(i + k - 1) % k];
            let next = mods[(i + 1) % k];
            mods[i] >= prev && mods[i] >= next && mods[i] >= rho * best
        })
        .collect();
    peaks.sort_by(|&a, &b| mods[b].total_cmp(&mods[a]).then(a.cmp(&b)));
    peaks.truncate(MAX_REFINED_PEAKS);

    let step = TAU / k as f64;
    let modulus = |theta: f64| f.eval(Complex64::from_polar(r, theta)).norm();
    let mut value = best;
    let mut theta = best_idx as f64 * step;
    for &i in &peaks {
        let centre = i as f64 * step;
        let (t, v) = golden_max(&modulus, centre - step, centre + step);
        if v > value {
            value = v;
            theta = t;
        }
    }

    let sampling_bound = if rho > 0.0 {
        best * (1.0 / rho - 1.0)
    } else {
        f.majorant(r) - best
    };
    MaxModulus {
        value,
        theta: theta.rem_euclid(TAU),
        samples: k,
        sampling_bound,
    }
}

fn golden_max(g: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut g1 = g(x1);
    let mut g2 = g(x2);
    for _ in 0..GOLDEN_ITERS {
        if g1 < g2 {
            lo = x1;
            x1 = x2;
            g1 = g2;
            x2 = lo + inv_phi * (hi - lo);
            g2 = g(x2);
        } else {
            hi = x2;
            x2 = x1;
            g2 = g1;
            x1 = hi - inv_phi * (hi - lo);
            g1 = g(x1);
        }
    }
    if g1 >= g2 {
        (x1, g1)
    } else {
        (x2, g2)
    }
}

/// Adaptive periodic trapezoid rule for `finalize(mean of integrand(f))`
/// over `|z| = r`.
///
/// Starts from `2 * k_start` nodes and compares the estimate on the even
/// subgrid with the full grid; the grid doubles until the two agree within
/// `tol` or `max_nodes` is exceeded. A stalled grid means the integrand is
/// not smooth at this resolution (a zero of `f` on or near the circle), and
/// the mean is then recomputed by [`split_circle_mean`].
pub(crate) fn adaptive_circle_mean(
    f: &TruncatedSeries,
    r: f64,
    k_start: usize,
    cfg: &QuadConfig,
    what: &'static str,
    integrand: impl Fn(Complex64) -> f64,
    finalize: impl Fn(f64) -> f64,
) -> Result<Estimate> {
    let mut k = 2 * k_start.max(1);
    let mut mean = f64::NAN;
    while k <= cfg.max_circle_nodes.max(2 * k_start) {
        let vals: Vec<f64> = circle_values(f, r, k).into_iter().map(&integrand).collect();
        let fine_sum: f64 = vals.iter().sum();
        let coarse_sum: f64 = vals.iter().step_by(2).sum();
        mean = fine_sum / k as f64;
        let fine = finalize(mean);
        let coarse = finalize(coarse_sum / (k / 2) as f64);
        let residual = (fine - coarse).abs();
        if !fine.is_finite() {
            return Err(FpError::Accuracy {
                what,
                residual,
                nodes: k,
            });
        }
        if residual <= cfg.tol {
            return Ok(Estimate {
                value: fine,
                residual,
                nodes: k,
            });
        }
        k *= 2;
    }
    // tolerance on the mean that maps to `tol` after `finalize`
    let h = 1e-6 * mean.abs().max(1e-300);
    let slope = ((finalize(mean + h) - finalize(mean)) / h).abs();
    let mean_tol = if slope.is_finite() { cfg.tol / slope.max(1.0) } else { cfg.tol };
    let est = split_circle_mean(f, r, cfg, what, mean_tol, integrand)?;
    let value = finalize(est.value);
    let residual = (finalize(est.value + est.residual) - value)
        .abs()
        .max((value - finalize((est.value - est.residual).max(0.0))).abs());
    if residual.is_finite() && residual <= cfg.tol {
        Ok(Estimate {
            value,
            residual,
            nodes: est.nodes,
        })
    } else {
        Err(FpError::Accuracy {
            what,
            residual,
            nodes: est.nodes,
        })
    }
}

/// Mean of `integrand(f)` over `|z| = r` by adaptive Gauss-Kronrod on arcs.
///
/// The circle is split at the local minima of `|f|` and at the crossings of
/// `|f| = 1`, both located on a sample grid and refined by golden section and
/// bisection, so each arc sees an integrand that is smooth except near its
/// endpoints.
pub(crate) fn split_circle_mean(
    f: &TruncatedSeries,
    r: f64,
    cfg: &QuadConfig,
    what: &'static str,
    tol: f64,
    integrand: impl Fn(Complex64) -> f64,
) -> Result<Estimate> {
    let k = 4 * quadrature_start(f, r).max(128);
    let step = TAU / k as f64;
    let sq: Vec<f64> = circle_values(f, r, k).iter().map(|w| w.norm_sqr()).collect();
    let at = |theta: f64| f.eval(Complex64::from_polar(r, theta));
    let mut breakpoints = vec![0.0, TAU];
    for j in 0..k {
        let (prev, here, next) = (sq[(j + k - 1) % k], sq[j], sq[(j + 1) % k]);
        if here <= prev && here <= next {
            let centre = j as f64 * step;
            let (t, _) = golden_max(&|t| -at(t).norm_sqr(), centre - step, centre + step);
            breakpoints.push(t.rem_euclid(TAU));
        }
        if (here > 1.0) != (next > 1.0) {
            let g = |t: f64| at(t).norm_sqr() > 1.0;
            breakpoints.push(bisect(g, j as f64 * step, (j + 1) as f64 * step, here > 1.0));
        }
    }
    breakpoints.sort_by(f64::total_cmp);
    breakpoints.dedup();
    let est = integrate_vec(
        |theta, out| {
            out[0] = integrand(at(theta)) / TAU;
            Ok(())
        },
        &breakpoints,
        1,
        tol,
        cfg.max_circle_nodes,
    )
    .map_err(|e| match e {
        FpError::Accuracy { residual, nodes, .. } => FpError::Accuracy { what, residual, nodes },
        other => other,
    })?;
    Ok(Estimate {
        value: est.values[0],
        residual: est.errors[0],
        nodes: est.nodes,
    })
}

/// Bisection for the change of the predicate `above` in `[a, b]`, given its
/// value at `a`.
fn bisect(above: impl Fn(f64) -> bool, mut a: f64, mut b: f64, above_at_a: bool) -> f64 {
    for _ in 0..64 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if above(mid) == above_at_a {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// Starting half-grid for circle quadratures at radius `r`.
pub(crate) fn quadrature_start(f: &TruncatedSeries, r: f64) -> usize {
    let deg = f.effective_degree(r, TAIL_EPS);
    (deg + 1).max(8).next_power_of_two()
}

/// `M_p(r, f) = (int |f(r e^{i theta})|^p d theta / 2 pi)^{1/p}` with the default
/// quadrature configuration.
pub fn mean_modulus_p(f: &TruncatedSeries, r: f64, p: f64) -> Result<f64> {
    mean_modulus_p_estimate(f, r, p, &QuadConfig::default()).map(|e| e.value)
}

pub fn mean_modulus_p_estimate(
    f: &TruncatedSeries,
    r: f64,
    p: f64,
    cfg: &QuadConfig,
) -> Result<Estimate> {
    check_radius(r)?;
    if !(p.is_finite() && p >= 1.0) {
        return Err(FpError::param(format!("p = {p} must satisfy p >= 1")));
    }
    mean_modulus_unchecked(f, r, p, cfg)
}

pub(crate) fn mean_modulus_unchecked(
    f: &TruncatedSeries,
    r: f64,
    p: f64,
    cfg: &QuadConfig,
) -> Result<Estimate> {
    let power = Power::new(p);
    let inv_p = 1.0 / p;
    adaptive_circle_mean(
        f,
        r,
        quadrature_start(f, r),
        cfg,
        "integral mean M_p",
        |w| power.of_norm_sqr(w.norm_sqr()),
        |m| m.powf(inv_p),
    )
}

/// `x^{p/2}` for `x = |w|^2`, avoiding `powf` when `2p` is a small integer.
#[derive(Debug, Clone, Copy)]
enum Power {
    Square,
    QuarterRoot(i32),
    General(f64),
}

impl Power {
    fn new(p: f64) -> Self {
        let twice = 2.0 * p;
        if p == 2.0 {
            Power::Square
        } else if twice.fract() == 0.0 && twice <= 64.0 {
            Power::QuarterRoot(twice as i32)
        } else {
            Power::General(p / 2.0)
        }
    }

    #[inline]
    fn of_norm_sqr(self, x: f64) -> f64 {
        match self {
            Power::Square => x,
            Power::QuarterRoot(k) => x.sqrt().sqrt().powi(k),
            Power::General(e) => x.powf(e),
        }
    }
}
