//! Log-Sobolev machinery for the quantum Ornstein-Uhlenbeck semigroup with
//! rates ν₀ = e^{−β/2}, ν₁ = e^{β/2} and fixed point σ_β.
//!
//! Scalar quantities (α_p, the thermal ratio, φ, the multimode bound) are
//! closed forms. Fock-space quantities are evaluated against the truncated,
//! unnormalised thermal reference returned by [`reference_state`], which makes
//! relative entropies and Dirichlet forms exact for operators supported inside
//! the cutoff.

mod dirichlet;
mod entropic;
mod norms;
mod spectrum;

pub use dirichlet::{
    binary_relative_entropy, dirichlet_form, dirichlet_form_abstract, dirichlet_form_p1, lsi_ratio, phi, phi_dx,
    thermal_dirichlet, thermal_ratio, thermal_relative_entropy, LsiRatio,
};
pub use entropic::{
    ent22, hypercontractivity_check, i22, lemma45_check, multimode_lsi_check, HypercontractivityReport, Lemma45Report,
    MultimodeLsiReport, Weights,
};
pub use norms::{
    gamma_conjugated_lindbladian, operator_dirichlet, reference_state, weighted_inner, weighted_p_norm, Gamma,
};
pub use spectrum::{
    diagonal_decomposition, eigen_check, hermite, mode_quadrature, quadrature, spectral_block_check, spectral_gap,
    BlockCheck, DiagonalDecomposition, EigenResidual, HermitePoly, SpectralGap,
};

use serde::Serialize;

use crate::channels::SemigroupParams;
use crate::meta_lsi::UpsilonParams;
use crate::{Error, Result};

/// Reference inverse temperature of the semigroup.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OUParams {
    beta: f64,
}

impl OUParams {
    pub fn new(beta: f64) -> Result<Self> {
        check_beta(beta)?;
        Ok(Self { beta })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn nu0(&self) -> f64 {
        (-self.beta / 2.0).exp()
    }

    pub fn nu1(&self) -> f64 {
        (self.beta / 2.0).exp()
    }

    pub fn semigroup(&self) -> SemigroupParams {
        SemigroupParams::ornstein_uhlenbeck(self.beta).expect("beta validated")
    }

    /// Υ parameters under which Υ = E_p/α_p − D(·‖σ) + const.
    pub fn upsilon_params(&self, p: f64) -> Result<UpsilonParams> {
        UpsilonParams::ornstein_uhlenbeck(p, self.beta)
    }

    /// Spectral gap sinh(β/2).
    pub fn gap(&self) -> f64 {
        (self.beta / 2.0).sinh()
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "beta",
            value: beta,
            reason: "inverse temperature must be positive and finite",
        });
    }
    Ok(())
}

/// (1 − e^{−βv})/v, with its limit β at v = 0.
fn damped(beta: f64, v: f64) -> f64 {
    if v == 0.0 {
        beta
    } else {
        -(-beta * v).exp_m1() / v
    }
}

/// Optimal p-log-Sobolev constant
/// α_p = (pp̂/4β) e^{β/2}(1 − e^{−β/p})(1 − e^{−β/p̂}), with α₁ = ½ sinh(β/2).
pub fn alpha_p_closed(p: f64, beta: f64) -> Result<f64> {
    if !(1.0..=2.0).contains(&p) {
        return Err(Error::InvalidParameter {
            name: "p",
            value: p,
            reason: "the optimal constant is only established for 1 ≤ p ≤ 2",
        });
    }
    check_beta(beta)?;
    // p̂(1 − e^{−β/p̂}) written through v = 1/p̂ = 1 − 1/p
    let v = 1.0 - 1.0 / p;
    Ok(p / (4.0 * beta) * (beta / 2.0).exp() * (-(-beta / p).exp_m1()) * damped(beta, v))
}

/// The p = 2 constant in the form 4 sinh²(β/4)/β.
pub fn alpha2_sinh_form(beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let s = (beta / 4.0).sinh();
    Ok(4.0 * s * s / beta)
}

/// Constant C in Υ = E_p/α_p − D(ρ‖σ) − ln(1 − e^{−β}) − C/α_p under the
/// Ornstein-Uhlenbeck parameter map: C = (pp̂/4)(e^{−β/2} − e^{(1/2−1/p)β}).
pub fn ou_meta_constant(p: f64, beta: f64) -> Result<f64> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "p",
            value: p,
            reason: "requires 1 < p < ∞",
        });
    }
    check_beta(beta)?;
    let ph = p / (p - 1.0);
    Ok(p * ph / 4.0 * ((-beta / 2.0).exp() - ((0.5 - 1.0 / p) * beta).exp()))
}

/// Lower bound on the m-mode 2-log-Sobolev constant:
/// ((2 + ln(2m+1))/sinh(β/2) + 1/α₂)^{−1}.
pub fn multimode_alpha2_bound(m: usize, beta: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidParameter {
            name: "m",
            value: 0.0,
            reason: "at least one mode is required",
        });
    }
    let a2 = alpha_p_closed(2.0, beta)?;
    let c = 2.0 + ((2 * m + 1) as f64).ln();
    Ok(1.0 / (c / (beta / 2.0).sinh() + 1.0 / a2))
}

/// Hypercontractive time (1/4α₂) ln((p−1)/(q−1)) for 1 < q ≤ p.
pub fn hypercontractivity_time(q: f64, p: f64, beta: f64) -> Result<f64> {
    if !(q > 1.0 && p >= q && p.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "q",
            value: q,
            reason: "requires 1 < q ≤ p < ∞",
        });
    }
    Ok(((p - 1.0) / (q - 1.0)).ln() / (4.0 * alpha_p_closed(2.0, beta)?))
}

#[cfg(test)]
mod tests;
