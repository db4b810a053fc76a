//! The two seminorm families on `F^p` and the metrics `d_p`, `lambda_p`.
//!
//! * coefficient family `||f||_{p,c} = sum |a_n| exp(-c n^{1/(p+1)})`;
//! * integral family `|||f|||_{p,c} = int_0^1 exp(-c (1-r)^{-1/p}) M_p(r, f) dr`.
//!
//! The integral family is computed after the substitution
//! `u = (1-r)^{-1/p}`, which turns it into
//! `int_1^inf exp(-c u) p u^{-p-1} M_p(1 - u^{-p}, f) du`: the weight becomes
//! a plain exponential and the mesh is automatically graded towards `r = 1`.

use num_complex::Complex64;
use serde::Serialize;

use crate::circle::{adaptive_circle_mean, mean_modulus_unchecked};
use crate::error::Result;
use crate::params::{check_positive, Estimate, QuadConfig, SeminormFamily, SeminormSpec, SpaceParams};
use crate::quadrature::integrate_vec;
use crate::series::TruncatedSeries;

/// Default truncation tolerance of the envelope metric.
pub const ENVELOPE_TOL: f64 = 1.0 / (1u64 << 40) as f64;

/// `sum_n |a_n| exp(-c n^{1/(p+1)})` over the stored coefficients.
///
/// Panics unless `c > 0`.
pub fn coeff_seminorm(f: &TruncatedSeries, sp: SpaceParams, c: f64) -> f64 {
    check_positive("c", c).expect("coefficient seminorm");
    let alpha = sp.alpha();
    f.coeffs()
        .iter()
        .enumerate()
        .map(|(n, a)| a.norm() * (-c * (n as f64).powf(alpha)).exp())
        .sum()
}

/// `|||f|||_{p,c}` with error at most `cfg.tol * sum |a_n|`.
pub fn integral_seminorm(
    f: &TruncatedSeries,
    sp: SpaceParams,
    c: f64,
    cfg: &QuadConfig,
) -> Result<Estimate> {
    Ok(integral_seminorms(f, sp, &[c], cfg)?[0])
}

/// `|||f|||_{p,c}` for several `c` at once, sharing every `M_p` evaluation.
pub fn integral_seminorms(
    f: &TruncatedSeries,
    sp: SpaceParams,
    cs: &[f64],
    cfg: &QuadConfig,
) -> Result<Vec<Estimate>> {
    for &c in cs {
        check_positive("c", c)?;
    }
    check_positive("tol", cfg.tol)?;
    if cs.is_empty() {
        return Ok(Vec::new());
    }
    if f.is_zero() {
        return Ok(vec![
            Estimate {
                value: 0.0,
                residual: 0.0,
                nodes: 0,
            };
            cs.len()
        ]);
    }

    // Adaptive decisions are made on f / sum|a_n| so that the computed value
    // is exactly homogeneous in f; the tolerance is relative to sum|a_n|.
    let p = sp.p();
    let scale = f.abs_sum();
    let unit = f.scale(Complex64::new(1.0 / scale, 0.0));
    let f = &unit;
    let bound = 1.0;
    let tail_tol = cfg.tol / 4.0;
    let circle_cfg = QuadConfig {
        tol: cfg.tol / 4.0,
        ..*cfg
    };
    let radial_tol = cfg.tol / 2.0;

    let cutoff = cs
        .iter()
        .map(|&c| tail_cutoff(bound, p, c, tail_tol))
        .fold(1.0, f64::max);
    let mut breakpoints = vec![1.0];
    let mut x = 4.0;
    while x < cutoff {
        breakpoints.push(x);
        x *= 4.0;
    }
    breakpoints.push(cutoff.max(2.0));

    // An error d(u) in M_p at node u costs at most d(u) * weight(u); asking
    // for d(u) = tol_c / (span * max weight(u)) keeps the integrated circle
    // error below tol_c.
    let span = cutoff - 1.0;
    let c_min = cs.iter().copied().fold(f64::INFINITY, f64::min);
    let est = integrate_vec(
        |u, out| {
            let r = 1.0 - u.powf(-p);
            let jac = p * u.powf(-p - 1.0);
            let node_cfg = QuadConfig {
                tol: circle_cfg.tol / (span * jac * (-c_min * u).exp()).max(1e-300),
                ..circle_cfg
            };
            let m = mean_modulus_unchecked(f, r, p, &node_cfg)?.value;
            for (o, &c) in out.iter_mut().zip(cs) {
                *o = (-c * u).exp() * jac * m;
            }
            Ok(())
        },
        &breakpoints,
        cs.len(),
        radial_tol,
        cfg.max_radial_nodes,
    )?;

    let cutoff = *breakpoints.last().expect("nonempty");
    Ok(cs
        .iter()
        .enumerate()
        .map(|(j, &c)| Estimate {
            value: est.values[j] * scale,
            residual: (est.errors[j] + tail_bound(bound, p, c, cutoff) + circle_cfg.tol) * scale,
            nodes: est.nodes,
        })
        .collect())
}

/// Bound on `int_U^inf exp(-c u) p u^{-p-1} M du` when `M <= bound`.
fn tail_bound(bound: f64, p: f64, c: f64, u: f64) -> f64 {
    bound * p * u.powf(-p - 1.0) * (-c * u).exp() / c
}

fn tail_cutoff(bound: f64, p: f64, c: f64, tol: f64) -> f64 {
    let mut u: f64 = 2.0;
    while tail_bound(bound, p, c, u) > tol {
        u *= 1.05;
    }
    u
}

/// Evaluates either family.
pub fn seminorm(
    f: &TruncatedSeries,
    sp: SpaceParams,
    spec: SeminormSpec,
    cfg: &QuadConfig,
) -> Result<Estimate> {
    match spec.family {
        SeminormFamily::Coefficient => Ok(Estimate {
            value: coeff_seminorm(f, sp, spec.c()),
            residual: 0.0,
            nodes: f.coeffs().len(),
        }),
        SeminormFamily::Integral => integral_seminorm(f, sp, spec.c(), cfg),
    }
}

/// Grid size used by `d_p` before adaptive doubling: `max(8 deg + 8, 1024)`.
pub fn privalov_metric_nodes(degree: usize) -> usize {
    (8 * degree + 8).max(1024)
}

/// `d_p(f, g) = (int (log(1 + |f - g|))^p d theta / 2 pi)^{1/p}` over the
/// unit circle, where polynomials coincide with their boundary functions.
pub fn privalov_metric(
    f: &TruncatedSeries,
    g: &TruncatedSeries,
    sp: SpaceParams,
    cfg: &QuadConfig,
) -> Result<Estimate> {
    check_positive("tol", cfg.tol)?;
    let diff = f - g;
    let p = sp.p();
    let inv_p = 1.0 / p;
    adaptive_circle_mean(
        &diff,
        1.0,
        privalov_metric_nodes(diff.degree()),
        cfg,
        "metric d_p",
        |w| w.norm().ln_1p().powf(p),
        |m| m.powf(inv_p),
    )
}

/// Truncated value of the metric `lambda_p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnvelopeEstimate {
    pub value: f64,
    /// The omitted terms sum to less than this.
    pub tail_bound: f64,
    pub terms: usize,
}

/// `lambda_p(f, g) = sum_{n>=1} 2^{-n} u_n / (1 + u_n)` with
/// `u_n = ||f - g||_{p, n^{-p/(p+1)}}`, summed through the first `n` with
/// `2^{-n} < tol`.
pub fn envelope_metric(
    f: &TruncatedSeries,
    g: &TruncatedSeries,
    sp: SpaceParams,
    tol: f64,
) -> Result<EnvelopeEstimate> {
    check_positive("tol", tol)?;
    let diff = f - g;
    let alpha = sp.alpha();
    let terms: Vec<(f64, f64)> = diff
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, a)| (a.norm(), (k as f64).powf(alpha)))
        .collect();
    let mut value = 0.0;
    let mut weight = 1.0;
    let mut n = 0usize;
    loop {
        n += 1;
        weight *= 0.5;
        let c = (n as f64).powf(-sp.conjugate_alpha());
        let u: f64 = terms.iter().map(|&(a, x)| a * (-c * x).exp()).sum();
        value += weight * u / (1.0 + u);
        if weight < tol {
            break;
        }
    }
    Ok(EnvelopeEstimate {
        value,
        tail_bound: weight,
        terms: n,
    })
}

/// `(c1, c2) = (c^{p/(p+1)}, (c/12)^{p/(p+1)})`.
pub fn theorem3_constants(sp: SpaceParams, c: f64) -> Result<(f64, f64)> {
    check_positive("c", c)?;
    let e = sp.conjugate_alpha();
    Ok((c.powf(e), (c / 12.0).powf(e)))
}
