use serde::Serialize;

use super::{upsilon_with, UpsilonParams};
use crate::channels::Boundary;
use crate::fock::{
    beam_splitter, mode_annihilation, mode_displacement, mode_phase_rotation, squeezer, Operator, State, TruncatedSpace,
};
use crate::{Error, Result, C64};

/// Υ_m(ρ) = (p̂/m)Σ_j⟨L_j(ρ^{1/p}), ρ^{1/p̂}⟩ + (ω/m)Σ_j tr(ρa_j†a_j) + S(ρ)/m.
pub fn upsilon_m(rho: &State, params: &UpsilonParams) -> Result<f64> {
    upsilon_with(rho, params, Boundary::Embedded)
}

/// Gaussian unitaries exercised by the two-mode invariance checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum GaussianUnitaryKind {
    /// D_{ξ₁} ⊗ D_{ξ₂}, given as (re, im) pairs.
    Displacement([(f64, f64); 2]),
    /// Beam splitter of angle θ after a phase φ on mode 2.
    Passive { theta: f64, phase: f64 },
    /// Single-mode squeezers with parameters r₁, r₂.
    Squeezer([f64; 2]),
}

impl GaussianUnitaryKind {
    pub fn name(&self) -> &'static str {
        match self {
            GaussianUnitaryKind::Displacement(_) => "displacement",
            GaussianUnitaryKind::Passive { .. } => "passive",
            GaussianUnitaryKind::Squeezer(_) => "squeezer",
        }
    }

    pub fn unitary(&self, space: TruncatedSpace) -> Result<Operator> {
        match self {
            GaussianUnitaryKind::Displacement(xi) => {
                let d1 = mode_displacement(C64::new(xi[0].0, xi[0].1), space, 0);
                let d2 = mode_displacement(C64::new(xi[1].0, xi[1].1), space, 1);
                Ok(&d1 * &d2)
            }
            GaussianUnitaryKind::Passive { theta, phase } => passive_unitary(*theta, *phase, space),
            GaussianUnitaryKind::Squeezer(r) => squeezer(r, space),
        }
    }
}

/// U_BS(θ)·e^{iφ a₂†a₂} on a two-mode space.
pub fn passive_unitary(theta: f64, phase: f64, space: TruncatedSpace) -> Result<Operator> {
    let bs = beam_splitter(theta, space)?;
    Ok(&bs * &mode_phase_rotation(phase, space, 1))
}

#[derive(Debug, Clone, Serialize)]
pub struct Lemma31Report {
    pub kind: &'static str,
    /// Largest violation of the precondition (0 for passive unitaries).
    pub precondition_residual: f64,
    pub precondition_ok: bool,
    pub before: f64,
    pub after: f64,
    /// (ω/m)Σ|ξ_j|² for displacements, 0 otherwise.
    pub expected_shift: f64,
    /// after − before
    pub margin: f64,
    pub tolerance: f64,
    /// `None` when the precondition failed and the check was skipped.
    pub pass: Option<bool>,
}

const PRECONDITION_TOL: f64 = 1e-10;

/// Compare Υ_m before and after ρ′ = UρU†.
///
/// * displacement: requires tr(ρa_j) = 0; asserts Υ_m(ρ′) = Υ_m(ρ) + (ω/m)Σ|ξ_j|²
/// * passive: asserts Υ_m(ρ′) = Υ_m(ρ)
/// * squeezer: requires tr(ρa_j²) = tr(ρ^{1/p}a_jρ^{1/p̂}a_j) = 0; asserts Υ_m(ρ′) ≥ Υ_m(ρ)
pub fn lemma31_check(
    rho: &State,
    params: &UpsilonParams,
    kind: &GaussianUnitaryKind,
    tolerance: f64,
) -> Result<Lemma31Report> {
    let space = rho.space();
    if space.modes() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: space.modes(),
        });
    }
    if params.p() == 1.0 {
        return Err(Error::InvalidParameter {
            name: "p",
            value: 1.0,
            reason: "the two-mode checks use p > 1",
        });
    }
    let residual = match kind {
        GaussianUnitaryKind::Displacement(_) => (0..2)
            .map(|j| rho.op().trace_product(&mode_annihilation(space, j)).norm())
            .fold(0.0, f64::max),
        GaussianUnitaryKind::Passive { .. } => 0.0,
        GaussianUnitaryKind::Squeezer(_) => {
            let spec = rho.spectrum();
            let a_pow = Operator::from_matrix(space, spec.power(1.0 / params.p())?);
            let b_pow = Operator::from_matrix(space, spec.power(1.0 / params.p_hat())?);
            let mut worst: f64 = 0.0;
            for j in 0..2 {
                let a = mode_annihilation(space, j);
                let a2 = &a * &a;
                worst = worst.max(rho.op().trace_product(&a2).norm());
                // tr(A a B a) as a complex number
                let m = &(&(&a_pow * &a) * &b_pow) * &a;
                worst = worst.max(m.trace().norm());
            }
            worst
        }
    };
    let precondition_ok = residual <= PRECONDITION_TOL;
    let before = upsilon_m(rho, params)?;
    let expected_shift = match kind {
        GaussianUnitaryKind::Displacement(xi) => {
            params.omega() / 2.0 * xi.iter().map(|(re, im)| re * re + im * im).sum::<f64>()
        }
        _ => 0.0,
    };
    if !precondition_ok {
        return Ok(Lemma31Report {
            kind: kind.name(),
            precondition_residual: residual,
            precondition_ok,
            before,
            after: f64::NAN,
            expected_shift,
            margin: f64::NAN,
            tolerance,
            pass: None,
        });
    }
    let u = kind.unitary(space)?;
    let after = upsilon_m(&rho.conjugate_by(&u), params)?;
    let margin = after - before;
    let pass = match kind {
        GaussianUnitaryKind::Displacement(_) => (margin - expected_shift).abs() <= tolerance,
        GaussianUnitaryKind::Passive { .. } => margin.abs() <= tolerance,
        GaussianUnitaryKind::Squeezer(_) => margin >= -tolerance,
    };
    Ok(Lemma31Report {
        kind: kind.name(),
        precondition_residual: residual,
        precondition_ok,
        before,
        after,
        expected_shift,
        margin,
        tolerance,
        pass: Some(pass),
    })
}
