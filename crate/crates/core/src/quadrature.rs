//! Globally adaptive Gauss–Kronrod (7/15) quadrature for vector-valued
//! integrands on a finite interval.
//!
//! All components share the same nodes, so an expensive common factor (an
//! integral mean, say) is evaluated once per node for every component.

use crate::error::{FpError, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const NODES_PER_PANEL: usize = 15;

/// Result of a vector quadrature.
#[derive(Debug, Clone, PartialEq)]
pub struct VecEstimate {
    pub values: Vec<f64>,
    /// Per-component error estimate summed over panels.
    pub errors: Vec<f64>,
    pub nodes: usize,
}

struct Panel {
    a: f64,
    b: f64,
    values: Vec<f64>,
    errors: Vec<f64>,
}

impl Panel {
    fn priority(&self) -> f64 {
        self.errors.iter().fold(0.0, |m: f64, &e| m.max(e))
    }
}

fn kronrod_panel<F>(f: &mut F, a: f64, b: f64, dim: usize, scratch: &mut [f64]) -> Result<Panel>
where
    F: FnMut(f64, &mut [f64]) -> Result<()>,
{
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut samples = [[0.0; 2]; 8];
    let mut values = vec![0.0; dim];
    let mut errors = vec![0.0; dim];
    let mut fx = vec![[0.0; 2]; 8 * dim];
    for (i, &x) in XGK.iter().enumerate() {
        f(centre - half * x, scratch)?;
        for j in 0..dim {
            fx[j * 8 + i][0] = scratch[j];
        }
        if x != 0.0 {
            f(centre + half * x, scratch)?;
        }
        for j in 0..dim {
            fx[j * 8 + i][1] = scratch[j];
        }
    }
    for j in 0..dim {
        samples.copy_from_slice(&fx[j * 8..j * 8 + 8]);
        let (v, e) = kronrod_rule(&samples, half);
        values[j] = v;
        errors[j] = e;
    }
    Ok(Panel {
        a,
        b,
        values,
        errors,
    })
}

/// One 15-point Kronrod estimate with the QUADPACK error heuristic.
/// `samples[i]` holds the values at `-x_i` and `+x_i` (equal for the centre).
fn kronrod_rule(samples: &[[f64; 2]; 8], half: f64) -> (f64, f64) {
    let centre = samples[7][0];
    let mut kron = WGK[7] * centre;
    let mut gauss = WG[3] * centre;
    let mut abs = WGK[7] * centre.abs();
    for i in 0..7 {
        let [lo, hi] = samples[i];
        kron += WGK[i] * (lo + hi);
        abs += WGK[i] * (lo.abs() + hi.abs());
        if i % 2 == 1 {
            gauss += WG[i / 2] * (lo + hi);
        }
    }
    let mean = 0.5 * kron;
    let mut asc = WGK[7] * (centre - mean).abs();
    for i in 0..7 {
        let [lo, hi] = samples[i];
        asc += WGK[i] * ((lo - mean).abs() + (hi - mean).abs());
    }
    let (value, abs, asc) = (kron * half, abs * half.abs(), asc * half.abs());
    let mut err = ((kron - gauss) * half).abs();
    if asc != 0.0 && err != 0.0 {
        err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
    }
    if abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * abs);
    }
    (value, err)
}

/// Integrates `f` over the panels defined by `breakpoints` (sorted, at least
/// two entries), bisecting the worst panel until every component's summed
/// error estimate is below `tol` or `max_nodes` evaluations are used.
///
/// `f(x, out)` writes the `dim` component values at `x` into `out`.
pub fn integrate_vec<F>(
    mut f: F,
    breakpoints: &[f64],
    dim: usize,
    tol: f64,
    max_nodes: usize,
) -> Result<VecEstimate>
where
    F: FnMut(f64, &mut [f64]) -> Result<()>,
{
    assert!(breakpoints.len() >= 2, "need at least one panel");
    let mut scratch = vec![0.0; dim];
    let mut panels = Vec::with_capacity(64);
    for w in breakpoints.windows(2) {
        panels.push(kronrod_panel(&mut f, w[0], w[1], dim, &mut scratch)?);
    }
    let mut nodes = panels.len() * NODES_PER_PANEL;

    loop {
        let totals = sum_errors(&panels, dim);
        if totals.iter().all(|&e| e <= tol) {
            break;
        }
        if nodes + 2 * NODES_PER_PANEL > max_nodes {
            return Err(FpError::Accuracy {
                what: "radial quadrature",
                residual: totals.iter().fold(0.0, |m: f64, &e| m.max(e)),
                nodes,
            });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.priority().total_cmp(&y.1.priority()))
            .map(|(i, _)| i)
            .expect("nonempty");
        let Panel { a, b, .. } = panels.swap_remove(worst);
        let mid = 0.5 * (a + b);
        panels.push(kronrod_panel(&mut f, a, mid, dim, &mut scratch)?);
        panels.push(kronrod_panel(&mut f, mid, b, dim, &mut scratch)?);
        nodes += 2 * NODES_PER_PANEL;
    }

    // sum in interval order so the result does not depend on refinement history
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut values = vec![0.0; dim];
    for p in &panels {
        for j in 0..dim {
            values[j] += p.values[j];
        }
    }
    Ok(VecEstimate {
        values,
        errors: sum_errors(&panels, dim),
        nodes,
    })
}

fn sum_errors(panels: &[Panel], dim: usize) -> Vec<f64> {
    let mut totals = vec![0.0; dim];
    for p in panels {
        for j in 0..dim {
            totals[j] += p.errors[j];
        }
    }
    totals
}
