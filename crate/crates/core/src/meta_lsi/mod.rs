//! The Υ functional and the meta log-Sobolev inequality Υ(ρ) ≥ η_th.
//!
//! For p > 1,
//!
//! ```text
//! Υ(ρ) = p̂[ν₀(tr ρaa† − tr ρ^{1/p}aρ^{1/p̂}a†) + ν₁(tr ρa†a − tr ρ^{1/p}a†ρ^{1/p̂}a)]
//!        + ω tr ρa†a + S(ρ)
//! ```
//!
//! evaluated with `aa† = a†a + 1` ([`Boundary::Embedded`]), which makes it
//! exact for states supported inside the cutoff. At p = 1 the first bracket
//! is replaced by ⟨L(ρ), ln ρ⟩ with the closed Lindbladian.

mod eta;
mod multimode;

pub use eta::{eta_th, EtaResult};
pub use multimode::{lemma31_check, passive_unitary, upsilon_m, GaussianUnitaryKind, Lemma31Report};

use serde::Serialize;

use crate::channels::{lindbladian_apply_with, Boundary, SemigroupParams};
use crate::fock::{mode_annihilation, regularize, Operator, State};
use crate::lsi_ou::alpha_p_closed;
use crate::{Error, Regularized, Result};

/// (ν₀, ν₁, ω, p) of the Υ functional.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UpsilonParams {
    nu0: f64,
    nu1: f64,
    omega: f64,
    p: f64,
}

impl UpsilonParams {
    pub fn new(nu0: f64, nu1: f64, omega: f64, p: f64) -> Result<Self> {
        for (name, v) in [("nu0", nu0), ("nu1", nu1), ("omega", omega)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    value: v,
                    reason: "must be finite and non-negative",
                });
            }
        }
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "p",
                value: p,
                reason: "p must be at least 1",
            });
        }
        Ok(Self { nu0, nu1, omega, p })
    }

    /// Parameters for which Υ ≥ η_th is the p-log-Sobolev inequality of the
    /// Ornstein-Uhlenbeck semigroup at the optimal constant α_p:
    /// ν₀ = (p/4α_p)e^{(1/2−1/p)β}, ν₁ = (p/4α_p)e^{−(1/2−1/p)β}, ω = 0.
    pub fn ornstein_uhlenbeck(p: f64, beta: f64) -> Result<Self> {
        let alpha = alpha_p_closed(p, beta)?;
        let s = (0.5 - 1.0 / p) * beta;
        Self::new(p / (4.0 * alpha) * s.exp(), p / (4.0 * alpha) * (-s).exp(), 0.0, p)
    }

    pub fn nu0(&self) -> f64 {
        self.nu0
    }

    pub fn nu1(&self) -> f64 {
        self.nu1
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Hölder conjugate p/(p−1); +∞ at p = 1.
    pub fn p_hat(&self) -> f64 {
        if self.p == 1.0 {
            f64::INFINITY
        } else {
            self.p / (self.p - 1.0)
        }
    }

    pub fn with_p(self, p: f64) -> Result<Self> {
        Self::new(self.nu0, self.nu1, self.omega, p)
    }

    pub fn semigroup(&self) -> SemigroupParams {
        SemigroupParams::new(self.nu0, self.nu1).expect("validated weights")
    }

    /// Same functional with ν₀, ν₁, ω divided by `s` (Υ/s up to the entropy weight).
    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(self.nu0 / s, self.nu1 / s, self.omega / s, self.p)
    }
}

/// tr(A X B X†) for Hermitian A, B.
pub(crate) fn sandwich(a: &Operator, x: &Operator, b: &Operator) -> f64 {
    let xb = x.matrix() * b.matrix();
    let m = xb * x.matrix().adjoint();
    a.matrix().transpose().dot(&m).re
}

/// Υ (p > 1) or its p = 1 convention, summed over modes and divided by m.
pub fn upsilon_with(rho: &State, params: &UpsilonParams, boundary: Boundary) -> Result<f64> {
    if params.p == 1.0 {
        return upsilon_p1(rho, params).map(|r| r.value);
    }
    let space = rho.space();
    let spec = rho.spectrum();
    let a_pow = Operator::from_matrix(space, spec.power(1.0 / params.p)?);
    let b_pow = Operator::from_matrix(space, spec.power(1.0 / params.p_hat())?);
    let entropy = spec.entropy();
    let ph = params.p_hat();
    let tr = rho.trace();
    let mut total = 0.0;
    for j in 0..space.modes() {
        let a = mode_annihilation(space, j);
        let n_j = rho.mean_photon(j);
        let aad = match boundary {
            Boundary::Embedded => n_j + tr,
            Boundary::Closed => rho.op().trace_product(&(&a * &a.adjoint())).re,
        };
        let x0 = sandwich(&a_pow, &a, &b_pow);
        let x1 = sandwich(&a_pow, &a.adjoint(), &b_pow);
        total += ph * (params.nu0 * (aad - x0) + params.nu1 * (n_j - x1)) + params.omega * n_j;
    }
    Ok((total + entropy) / space.modes() as f64)
}

/// Υ(ρ) with the embedded convention (p = 1 delegates to [`upsilon_p1`]).
pub fn upsilon(rho: &State, params: &UpsilonParams) -> Result<f64> {
    upsilon_with(rho, params, Boundary::Embedded)
}

/// ⟨L(ρ), ln ρ⟩ + ω tr(ρa†a) + S(ρ), averaged over modes.
pub fn upsilon_p1(rho: &State, params: &UpsilonParams) -> Result<Regularized> {
    let (reg, spec, eps) = regularize(rho);
    let space = reg.space();
    let log = Operator::from_matrix(space, spec.log()?);
    let l = lindbladian_apply_with(&params.semigroup(), reg.op(), Boundary::Closed);
    let flow = l.trace_product(&log).re;
    let photons: f64 = (0..space.modes()).map(|j| reg.mean_photon(j)).sum();
    let value = (flow + params.omega * photons + spec.entropy()) / space.modes() as f64;
    Ok(Regularized { value, mixing: eps })
}

/// Υ(τ_x) for the untruncated thermal state (closed form).
pub fn upsilon_thermal(x: f64, params: &UpsilonParams) -> f64 {
    let lx = x.ln();
    let one_minus = 1.0 - x;
    let entropy = -x * lx / one_minus - (-x).ln_1p();
    let photons = params.omega * x / one_minus;
    if params.p == 1.0 {
        return (params.nu1 * x - params.nu0) * lx / one_minus + photons + entropy;
    }
    let ph = params.p_hat();
    // 1 − x^{1/p̂} and x − x^{1/p} = x(1 − x^{−1/p̂})
    let d0 = -(lx / ph).exp_m1();
    let d1 = -x * (-lx / ph).exp_m1();
    ph / one_minus * (params.nu0 * d0 + params.nu1 * d1) + photons + entropy
}

/// The explicit series for a diagonal state with populations λ_n (λ_N = 0):
/// p̂Σ[ν₀(n+1)(λ_n − λ_n^{1/p}λ_{n+1}^{1/p̂}) + ν₁n(λ_n − λ_n^{1/p}λ_{n−1}^{1/p̂})]
/// + ωΣnλ_n − Σλ_n ln λ_n. Requires p > 1.
pub fn upsilon_diagonal_series(probs: &[f64], params: &UpsilonParams) -> f64 {
    let p = params.p;
    let ph = params.p_hat();
    let pw = |l: f64, e: f64| if l <= 0.0 { 0.0 } else { l.powf(e) };
    let at = |k: isize| -> f64 {
        if k < 0 || k as usize >= probs.len() {
            0.0
        } else {
            probs[k as usize]
        }
    };
    let mut total = 0.0;
    for (n, &l) in probs.iter().enumerate() {
        let nf = n as f64;
        let k = n as isize;
        total += ph
            * (params.nu0 * (nf + 1.0) * (l - pw(l, 1.0 / p) * pw(at(k + 1), 1.0 / ph))
                + params.nu1 * nf * (l - pw(l, 1.0 / p) * pw(at(k - 1), 1.0 / ph)));
        total += params.omega * nf * l;
        if l > 0.0 {
            total -= l * l.ln();
        }
    }
    total
}

/// ρ̂: the spectrum of ρ sorted decreasingly onto |0⟩, |1⟩, …
pub fn diagonal_rearrangement(rho: &State) -> Result<State> {
    if rho.space().modes() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: rho.space().modes(),
        });
    }
    let sorted: Vec<f64> = rho.spectrum().sorted_desc().into_iter().map(|l| l.max(0.0)).collect();
    Ok(State::trusted(
        Operator::from_diagonal(rho.space(), &sorted)?,
        rho.tail_mass(),
    ))
}

/// Per-check record of the meta log-Sobolev inequality on one state.
#[derive(Debug, Clone, Serialize)]
pub struct MetaLsiReport {
    pub upsilon: f64,
    pub upsilon_rearranged: f64,
    pub eta: EtaResult,
    /// Υ(ρ) − Υ(ρ̂)
    pub rearrangement_margin: f64,
    /// Υ(ρ̂) − η_th
    pub eta_margin: f64,
    pub rearrangement_tolerance: f64,
    pub eta_tolerance: f64,
    pub pass: bool,
}

/// Budget multiplier K for the tail-mass term of a tolerance: every term of
/// Υ that the cutoff drops is bounded by (N+1)(p̂(ν₀+ν₁)+ω) + |ln tail| + 1
/// times the missing probability (p̂ replaced by |ln tail| + 1 at p = 1).
pub fn tail_factor(params: &UpsilonParams, levels: usize, tail: f64) -> f64 {
    if tail <= 0.0 {
        return 0.0;
    }
    let log = tail.ln().abs() + 1.0;
    let ph = if params.p == 1.0 { log } else { params.p_hat() };
    (levels as f64 + 1.0) * (ph * (params.nu0 + params.nu1) + params.omega) + log
}

/// Evaluate Υ(ρ), Υ(ρ̂) and η_th and check Υ(ρ) ≥ Υ(ρ̂) ≥ η_th.
pub fn verify_meta_lsi(rho: &State, params: &UpsilonParams) -> Result<MetaLsiReport> {
    verify_meta_lsi_against(rho, params, &eta_th(params))
}

/// As [`verify_meta_lsi`] with a precomputed η_th.
pub fn verify_meta_lsi_against(rho: &State, params: &UpsilonParams, eta: &EtaResult) -> Result<MetaLsiReport> {
    let hat = diagonal_rearrangement(rho)?;
    let (u, uh, slack) = if params.p == 1.0 {
        let a = upsilon_p1(rho, params)?;
        let b = upsilon_p1(&hat, params)?;
        (a.value, b.value, a.slack(rho.dim()) + b.slack(rho.dim()))
    } else {
        (upsilon(rho, params)?, upsilon(&hat, params)?, 0.0)
    };
    let k = tail_factor(params, rho.space().levels(), rho.tail_mass());
    let tail_budget = k * rho.tail_mass();
    let rearrangement_tolerance = 1e-8 + tail_budget + slack;
    let eta_tolerance = 1e-6 + tail_budget + slack;
    let rearrangement_margin = u - uh;
    let eta_margin = uh - eta.value;
    Ok(MetaLsiReport {
        upsilon: u,
        upsilon_rearranged: uh,
        eta: *eta,
        rearrangement_margin,
        eta_margin,
        rearrangement_tolerance,
        eta_tolerance,
        pass: rearrangement_margin >= -rearrangement_tolerance && eta_margin >= -eta_tolerance,
    })
}
