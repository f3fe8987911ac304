use serde::Serialize;

use super::{upsilon_thermal, UpsilonParams};

/// Infimum of Υ over thermal states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EtaResult {
    pub value: f64,
    /// Minimiser in [0, 1]; 0 or 1 when the infimum is a boundary limit.
    pub argmin_x: f64,
    pub attained_at_boundary: bool,
}

const GRID_HALF: usize = 1000;
const X_MIN: f64 = 1e-6;

/// lim_{x→0⁺} Υ(τ_x): p̂ν₀ for p > 1; for p = 1 it is +∞ unless ν₀ = 0.
fn limit_at_zero(params: &UpsilonParams) -> f64 {
    if params.p() > 1.0 {
        params.p_hat() * params.nu0()
    } else if params.nu0() > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

/// Grid of 2000 points on (0,1): log-spaced in x on [1e−6, ½] and
/// log-spaced in 1−x on [1e−6, ½].
fn grid() -> Vec<f64> {
    let step = (0.5f64 / X_MIN).ln() / (GRID_HALF - 1) as f64;
    let mut xs: Vec<f64> = (0..GRID_HALF).map(|i| X_MIN * (step * i as f64).exp()).collect();
    xs.extend((0..GRID_HALF).rev().map(|i| 1.0 - X_MIN * (step * i as f64).exp()));
    xs.dedup();
    xs
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-15 * (1.0 + a.abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// η_th = inf_{0<x<1} Υ(τ_x): grid scan, golden-section refinement of the
/// best bracket, then comparison with the analytic x→0⁺ limit (the x→1⁻
/// limit is always +∞ because the entropy diverges).
pub fn eta_th(params: &UpsilonParams) -> EtaResult {
    let f = |x: f64| upsilon_thermal(x, params);
    let xs = grid();
    let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let (best, _) = vals
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_finite())
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("grid has finite values");
    let lo = xs[best.saturating_sub(1)];
    let hi = xs[(best + 1).min(xs.len() - 1)];
    let (mut x_star, mut v_star) = golden_section(f, lo, hi);
    if vals[best] < v_star {
        x_star = xs[best];
        v_star = vals[best];
    }
    let zero = limit_at_zero(params);
    if zero <= v_star {
        EtaResult {
            value: zero,
            argmin_x: 0.0,
            attained_at_boundary: true,
        }
    } else {
        EtaResult {
            value: v_star,
            argmin_x: x_star,
            attained_at_boundary: false,
        }
    }
}
