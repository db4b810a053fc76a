use serde::{Deserialize, Serialize};

use crate::error::{FpError, Result};

/// Exponent `p > 1` of `F^p` and its derived `alpha = 1/(p+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct SpaceParams {
    p: f64,
}

impl SpaceParams {
    pub fn new(p: f64) -> Result<Self> {
        if !(p.is_finite() && p > 1.0) {
            return Err(FpError::param(format!("p = {p} must satisfy p > 1")));
        }
        Ok(Self { p })
    }

    pub fn p(self) -> f64 {
        self.p
    }

    /// `1/(p+1)`, the exponent of `n` in the coefficient weights.
    pub fn alpha(self) -> f64 {
        1.0 / (self.p + 1.0)
    }

    /// `p/(p+1)`.
    pub fn conjugate_alpha(self) -> f64 {
        self.p / (self.p + 1.0)
    }
}

impl TryFrom<f64> for SpaceParams {
    type Error = FpError;
    fn try_from(p: f64) -> Result<Self> {
        Self::new(p)
    }
}

impl From<SpaceParams> for f64 {
    fn from(sp: SpaceParams) -> f64 {
        sp.p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeminormFamily {
    /// `sum |a_n| exp(-c n^{1/(p+1)})`.
    Coefficient,
    /// `int_0^1 exp(-c (1-r)^{-1/p}) M_p(r, f) dr`.
    Integral,
}

/// A member of one of the two seminorm families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeminormSpec {
    pub family: SeminormFamily,
    c: f64,
}

impl SeminormSpec {
    pub fn new(family: SeminormFamily, c: f64) -> Result<Self> {
        check_positive("c", c)?;
        Ok(Self { family, c })
    }

    pub fn c(&self) -> f64 {
        self.c
    }
}

pub(crate) fn check_positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(FpError::param(format!("{name} = {x} must be positive")))
    }
}

pub(crate) fn check_radius(r: f64) -> Result<()> {
    if (0.0..1.0).contains(&r) {
        Ok(())
    } else {
        Err(FpError::param(format!("r = {r} must lie in [0, 1)")))
    }
}

/// Tolerances and node budgets shared by the quadrature-based operations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    /// Absolute tolerance on the returned value.
    pub tol: f64,
    /// Integrand evaluations allowed for a radial (interval) quadrature.
    pub max_radial_nodes: usize,
    /// Largest equispaced grid allowed for a circle quadrature.
    pub max_circle_nodes: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_radial_nodes: 20_000,
            max_circle_nodes: 1 << 17,
        }
    }
}

impl QuadConfig {
    pub fn with_tol(tol: f64) -> Result<Self> {
        check_positive("tol", tol)?;
        Ok(Self {
            tol,
            ..Self::default()
        })
    }
}

/// A quadrature result: value, estimated absolute error, integrand evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub residual: f64,
    pub nodes: usize,
}
