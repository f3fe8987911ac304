use serde::Serialize;

use super::norms::{operator_dirichlet, reference_state, Gamma};
use super::spectrum::diagonal_decomposition;
use super::{hypercontractivity_time, multimode_alpha2_bound, OUParams};
use crate::channels::Propagator;
use crate::fock::{relative_entropy, Operator, Spectrum, State};
use crate::{Error, Result, C64};

/// Ent_{2,σ}(X) = ‖X‖²_{2,σ} D(ρ_X‖σ) with ρ_X = |Γ^{1/2}(X)|²/‖X‖²_{2,σ}.
/// For positive X this is D(ρ‖σ)·‖X‖² with X = Γ^{−1/2}(ρ^{1/2}).
pub fn ent22(x: &Operator, sigma: &State) -> Result<f64> {
    let y = Gamma::new(sigma)?.apply(0.5, x)?;
    let yy = y.adjoint() * y;
    let norm2 = yy.trace().re;
    if norm2 <= 0.0 {
        return Ok(0.0);
    }
    let rho = State::new(yy.scale_real(1.0 / norm2), sigma.tail_mass())?;
    Ok(norm2 * relative_entropy(&rho, sigma)?)
}

/// I_{2,2}(X) = Γ^{−1/2}(|Γ^{1/2}(X)|).
pub fn i22(x: &Operator, sigma: &State) -> Result<Operator> {
    let gamma = Gamma::new(sigma)?;
    let y = gamma.apply(0.5, x)?;
    let yy = y.adjoint() * y;
    let abs = Spectrum::of(yy.matrix()).map(|l| l.max(0.0).sqrt());
    gamma.apply(-0.5, &Operator::from_matrix(x.space(), abs))
}

/// Weight vector over retained diagonal blocks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Weights {
    Uniform,
    /// w_ℓ = e^{−c|ℓ|/2}, |ℓ| = Σ_j |ℓ_j|.
    Exponential {
        c: f64,
    },
}

impl Weights {
    pub fn weight(&self, offset: &[isize]) -> f64 {
        match *self {
            Weights::Uniform => 1.0,
            Weights::Exponential { c } => {
                let l1: isize = offset.iter().map(|l| l.abs()).sum();
                (-c * l1 as f64 / 2.0).exp()
            }
        }
    }
}

/// Both sides of
/// Ent(X) ≤ Σ_ℓ (ln‖w‖² − ln w_ℓ²)‖X_ℓ‖² + Σ_ℓ Ent(I_{2,2}(X_ℓ)).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma45Report {
    pub entropy: f64,
    pub penalty: f64,
    pub block_entropy: f64,
    /// rhs − lhs.
    pub margin: f64,
    pub blocks: usize,
}

/// Blocks with ‖X_ℓ‖_{2,σ} at or below this are dropped from both sides.
const BLOCK_FLOOR: f64 = 1e-14;

pub fn lemma45_check(x: &Operator, sigma: &State, weights: Weights) -> Result<Lemma45Report> {
    if let Weights::Exponential { c } = weights {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "c",
                value: c,
                reason: "exponential weight rate must be positive",
            });
        }
    }
    let gamma = Gamma::new(sigma)?;
    let decomp = diagonal_decomposition(x);
    let mut kept = Vec::new();
    for (offset, block) in decomp.blocks() {
        let n2 = gamma.inner(block, block)?.re;
        if n2.sqrt() > BLOCK_FLOOR {
            kept.push((weights.weight(offset), n2, block));
        }
    }
    let w2: f64 = kept.iter().map(|(w, _, _)| w * w).sum();
    let mut penalty = 0.0;
    let mut block_entropy = 0.0;
    for (w, n2, block) in &kept {
        penalty += (w2.ln() - (w * w).ln()) * n2;
        block_entropy += ent22(&i22(block, sigma)?, sigma)?;
    }
    let entropy = ent22(x, sigma)?;
    Ok(Lemma45Report {
        entropy,
        penalty,
        block_entropy,
        margin: penalty + block_entropy - entropy,
        blocks: kept.len(),
    })
}

/// Ent_{2,σ̂}(X) against ⟨X, L̂*(X)⟩_σ̂ / α̂ with α̂ the multimode lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MultimodeLsiReport {
    pub modes: usize,
    pub bound: f64,
    pub entropy: f64,
    pub dirichlet: f64,
    /// ⟨X, L̂*X⟩/bound − Ent.
    pub margin: f64,
}

pub fn multimode_lsi_check(x: &Operator, ou: &OUParams) -> Result<MultimodeLsiReport> {
    let space = x.space();
    let bound = multimode_alpha2_bound(space.modes(), ou.beta())?;
    let sigma = reference_state(ou, space)?;
    let entropy = ent22(x, &sigma)?;
    let dirichlet = operator_dirichlet(x, ou)?;
    Ok(MultimodeLsiReport {
        modes: space.modes(),
        bound,
        entropy,
        dirichlet,
        margin: dirichlet / bound - entropy,
    })
}

/// ‖Φ_t*(X)‖_{p,σ} ≤ ‖X‖_{q,σ} at the hypercontractive time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HypercontractivityReport {
    pub q: f64,
    pub p: f64,
    pub time: f64,
    pub evolved_norm: f64,
    pub initial_norm: f64,
    pub margin: f64,
}

/// Uses the closed truncation, whose invariant state is the renormalised
/// truncated thermal state; norms are taken against that state.
pub fn hypercontractivity_check(x: &Operator, ou: &OUParams, q: f64, p: f64) -> Result<HypercontractivityReport> {
    let space = x.space();
    let time = hypercontractivity_time(q, p, ou.beta())?;
    let reference = reference_state(ou, space)?;
    let tr = reference.trace();
    let sigma = State::new(reference.op().scale(C64::new(1.0 / tr, 0.0)), 0.0)?;
    let gamma = Gamma::new(&sigma)?;
    let evolved = Propagator::new(&ou.semigroup(), space.levels(), time)?.apply_adjoint(x)?;
    let evolved_norm = gamma.norm(&evolved, p)?;
    let initial_norm = gamma.norm(x, q)?;
    Ok(HypercontractivityReport {
        q,
        p,
        time,
        evolved_norm,
        initial_norm,
        margin: initial_norm - evolved_norm,
    })
}
