use serde::Serialize;

use super::norms::{reference_state, Gamma};
use super::OUParams;
use crate::channels::{lindbladian_adjoint_with, lindbladian_apply, Boundary};
use crate::fock::{mode_annihilation, regularize, relative_entropy, Operator, State};
use crate::meta_lsi::sandwich;
use crate::tol::RATIO_FLOOR;
use crate::{Error, Regularized, Result, C64};

fn check_p_open(p: f64) -> Result<f64> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "p",
            value: p,
            reason: "needs 1 < p < ∞; use dirichlet_form_p1 at p = 1",
        });
    }
    Ok(p / (p - 1.0))
}

/// E_p(ρ) from the expanded trace formula, summed over modes:
/// (pp̂/4)Σ_j[e^{−β/2}(tr ρa_ja_j† − e^{β/p}tr ρ^{1/p̂}a_jρ^{1/p}a_j†)
///         + e^{β/2}(tr ρa_j†a_j − e^{−β/p}tr ρ^{1/p̂}a_j†ρ^{1/p}a_j)].
pub fn dirichlet_form(rho: &State, p: f64, ou: &OUParams) -> Result<f64> {
    let ph = check_p_open(p)?;
    let space = rho.space();
    let spec = rho.spectrum();
    let r_p = Operator::from_matrix(space, spec.power(1.0 / p)?);
    let r_ph = Operator::from_matrix(space, spec.power(1.0 / ph)?);
    let beta = ou.beta();
    let tr = rho.trace();
    let mut total = 0.0;
    for j in 0..space.modes() {
        let a = mode_annihilation(space, j);
        let n = rho.mean_photon(j);
        let y0 = sandwich(&r_ph, &a, &r_p);
        let y1 = sandwich(&r_ph, &a.adjoint(), &r_p);
        total += ou.nu0() * (n + tr) - (beta * (1.0 / p - 0.5)).exp() * y0;
        total += ou.nu1() * n - (beta * (0.5 - 1.0 / p)).exp() * y1;
    }
    Ok(p * ph / 4.0 * total)
}

/// E_p(ρ) = (pp̂/4)⟨Γ^{−1/p̂}(ρ^{1/p̂}), L*Γ^{−1/p}(ρ^{1/p})⟩_σ.
pub fn dirichlet_form_abstract(rho: &State, p: f64, ou: &OUParams) -> Result<f64> {
    let ph = check_p_open(p)?;
    let space = rho.space();
    let gamma = Gamma::new(&reference_state(ou, space)?)?;
    let spec = rho.spectrum();
    let left = gamma.apply(-1.0 / ph, &Operator::from_matrix(space, spec.power(1.0 / ph)?))?;
    let right = gamma.apply(-1.0 / p, &Operator::from_matrix(space, spec.power(1.0 / p)?))?;
    let lr = lindbladian_adjoint_with(&ou.semigroup(), &right, Boundary::Embedded);
    Ok(p * ph / 4.0 * gamma.inner(&left, &lr)?.re)
}

/// E_1(ρ) = ¼ tr(L(ρ)(ln ρ − ln σ)) with the closed generator, on the
/// regularised state.
pub fn dirichlet_form_p1(rho: &State, ou: &OUParams) -> Result<Regularized> {
    let (reg, spec, eps) = regularize(rho);
    let space = reg.space();
    let sigma = reference_state(ou, space)?;
    let mut log = spec.log()?;
    for i in 0..space.dim() {
        log[(i, i)] -= C64::new(sigma.matrix()[(i, i)].re.ln(), 0.0);
    }
    let l = lindbladian_apply(&ou.semigroup(), reg.op());
    let value = 0.25 * l.trace_product(&Operator::from_matrix(space, log)).re;
    Ok(Regularized { value, mixing: eps })
}

/// E_p(ρ)/D(ρ‖σ) with both pieces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LsiRatio {
    pub value: f64,
    pub dirichlet: f64,
    pub relative_entropy: f64,
    /// Regularisation weight used at p = 1.
    pub mixing: f64,
    /// False outside 1 ≤ p ≤ 2, where no optimal constant is established.
    pub proven: bool,
}

pub fn lsi_ratio(rho: &State, p: f64, ou: &OUParams) -> Result<LsiRatio> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "p",
            value: p,
            reason: "needs 1 ≤ p < ∞",
        });
    }
    let sigma = reference_state(ou, rho.space())?;
    let (dirichlet, d, mixing) = if p == 1.0 {
        let e = dirichlet_form_p1(rho, ou)?;
        let (reg, _, _) = regularize(rho);
        (e.value, relative_entropy(&reg, &sigma)?, e.mixing)
    } else {
        (dirichlet_form(rho, p, ou)?, relative_entropy(rho, &sigma)?, 0.0)
    };
    if d < RATIO_FLOOR {
        return Err(Error::UndefinedRatio { denominator: d });
    }
    Ok(LsiRatio {
        value: dirichlet / d,
        dirichlet,
        relative_entropy: d,
        mixing,
        proven: p <= 2.0,
    })
}

/// (e^{va} − e^{vb})/v with its limit a − b at v = 0.
fn scaled_gap(v: f64, a: f64, b: f64) -> f64 {
    if v == 0.0 {
        a - b
    } else {
        ((v * a).exp_m1() - (v * b).exp_m1()) / v
    }
}

/// d(a‖b) = a ln(a/b) + (1−a) ln((1−a)/(1−b)).
pub fn binary_relative_entropy(a: f64, b: f64) -> f64 {
    let first = if a > 0.0 { a * (a / b).ln() } else { 0.0 };
    let second = if a < 1.0 {
        (1.0 - a) * ((-a).ln_1p() - (-b).ln_1p())
    } else {
        0.0
    };
    first + second
}

fn check_unit(name: &'static str, v: f64) -> Result<()> {
    if !(v > 0.0 && v < 1.0) {
        return Err(Error::InvalidParameter {
            name,
            value: v,
            reason: "must lie in (0,1)",
        });
    }
    Ok(())
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "p",
            value: p,
            reason: "needs 1 ≤ p < ∞",
        });
    }
    Ok(())
}

/// E_p(τ) for τ = (1−y²)Σ y^{2n}|n⟩⟨n|:
/// (pp̂/4(1−y²)) e^{β/2}(y^{2/p} − e^{−β/p})(y^{2/p̂} − e^{−β/p̂}).
pub fn thermal_dirichlet(y: f64, p: f64, beta: f64) -> Result<f64> {
    check_unit("y", y)?;
    check_p(p)?;
    OUParams::new(beta)?;
    let ly2 = 2.0 * y.ln();
    let u = 1.0 / p;
    let first = scaled_gap(u, ly2, -beta) * u;
    // p̂(y^{2/p̂} − e^{−β/p̂}) through v = 1/p̂
    let second = scaled_gap(1.0 - u, ly2, -beta);
    Ok(p * (beta / 2.0).exp() / (4.0 * (1.0 - y * y)) * first * second)
}

/// D(τ‖σ) = d(y²‖e^{−β})/(1−y²).
pub fn thermal_relative_entropy(y: f64, beta: f64) -> Result<f64> {
    check_unit("y", y)?;
    OUParams::new(beta)?;
    Ok(binary_relative_entropy(y * y, (-beta).exp()) / (1.0 - y * y))
}

/// E_p(τ)/D(τ‖σ) in closed form.
pub fn thermal_ratio(y: f64, p: f64, beta: f64) -> Result<f64> {
    let d = thermal_relative_entropy(y, beta)?;
    if d < RATIO_FLOOR {
        return Err(Error::UndefinedRatio { denominator: d });
    }
    Ok(thermal_dirichlet(y, p, beta)? / d)
}

/// expm1(c·l)/c, limit l at c = 0.
fn s(c: f64, l: f64) -> f64 {
    if c == 0.0 {
        l
    } else {
        (c * l).exp_m1() / c
    }
}

struct PhiTerms {
    lx: f64,
    ly: f64,
}

impl PhiTerms {
    // (x^c − y^c)/(1 − x^c)
    fn q(&self, c: f64) -> f64 {
        (s(c, self.lx) - s(c, self.ly)) / -s(c, self.lx)
    }

    // (1 − y^c)/(1 − x^c)
    fn r(&self, c: f64) -> f64 {
        s(c, self.ly) / s(c, self.lx)
    }

    // ln x²/(p(1 − x^{2/p})) + 1 with c = 2/p
    fn bracket(&self, c: f64) -> f64 {
        1.0 - self.lx / s(c, self.lx)
    }
}

/// φ(x, y) = −d(y²‖x²) − ln x² · (x^{2/p} − y^{2/p})(x^{2/p̂} − y^{2/p̂})
/// / ((1 − x^{2/p})(1 − x^{2/p̂})), for 0 < x, y < 1 and p ≥ 1.
pub fn phi(x: f64, y: f64, p: f64) -> f64 {
    let t = PhiTerms { lx: x.ln(), ly: y.ln() };
    let u = 1.0 / p;
    -binary_relative_entropy(y * y, x * x) - 2.0 * t.lx * t.q(2.0 * u) * t.q(2.0 * (1.0 - u))
}

/// ∂φ/∂x in closed form.
pub fn phi_dx(x: f64, y: f64, p: f64) -> f64 {
    let t = PhiTerms { lx: x.ln(), ly: y.ln() };
    let cu = 2.0 / p;
    let cv = 2.0 * (1.0 - 1.0 / p);
    let one_minus_y = |c: f64| -(c * t.ly).exp_m1();
    let first = 2.0 * x / (1.0 - x * x) * (one_minus_y(cv) * t.q(cu) + one_minus_y(cu) * t.q(cv));
    let second = 2.0 / x * x.powf(cu) * t.r(cu) * t.q(cv) * t.bracket(cu);
    let third = 2.0 / x * x.powf(cv) * t.r(cv) * t.q(cu) * t.bracket(cv);
    first - second - third
}
