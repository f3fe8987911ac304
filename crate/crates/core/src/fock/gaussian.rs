//! Explicit Gaussian unitaries on the truncated space.
//!
//! Each unitary is `exp(G)` for the truncated anti-Hermitian generator `G`,
//! computed through the eigendecomposition of the Hermitian matrix `iG`. The
//! result is exactly unitary on the cutoff space; it differs from the
//! untruncated operator only through the generator's cutoff at the top levels.

use nalgebra::DMatrix;

use super::{mode_annihilation, Operator, Spectrum, State, TruncatedSpace};
use crate::{Error, Result, C64};

fn exp_anti_hermitian(space: TruncatedSpace, g: DMatrix<C64>) -> Operator {
    let h = g * C64::new(0.0, 1.0);
    let spec = Spectrum::of(&h);
    // exp(G) = exp(−i H)
    Operator::from_matrix(space, spec.map_complex(|l| C64::new(0.0, -l).exp()))
}

/// D_ξ = exp(ξa† − ξ̄a) on a single-mode space.
pub fn displacement(xi: C64, space: TruncatedSpace) -> Operator {
    mode_displacement(xi, space, 0)
}

/// Displacement acting on mode `mode` of a multimode space.
pub fn mode_displacement(xi: C64, space: TruncatedSpace, mode: usize) -> Operator {
    let a = mode_annihilation(space, mode);
    let g = a.matrix().adjoint() * xi - a.matrix() * xi.conj();
    exp_anti_hermitian(space, g)
}

/// Beam splitter exp(θ(a₁†a₂ − a₁a₂†)) on a two-mode space, so that
/// U†a₁U = cos θ·a₁ + sin θ·a₂ (transmissivity λ = cos²θ).
pub fn beam_splitter(theta: f64, space: TruncatedSpace) -> Result<Operator> {
    if space.modes() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: space.modes(),
        });
    }
    let a1 = mode_annihilation(space, 0);
    let a2 = mode_annihilation(space, 1);
    let x = a1.matrix().adjoint() * a2.matrix();
    let g = (&x - x.adjoint()) * C64::new(theta, 0.0);
    Ok(exp_anti_hermitian(space, g))
}

/// Squeezer exp(½ Σ_j r_j(a_j² − a_j†²)), one parameter per mode.
pub fn squeezer(r: &[f64], space: TruncatedSpace) -> Result<Operator> {
    if r.len() != space.modes() {
        return Err(Error::DimensionMismatch {
            expected: space.modes(),
            found: r.len(),
        });
    }
    let d = space.dim();
    let mut g = DMatrix::zeros(d, d);
    for (j, &rj) in r.iter().enumerate() {
        let a = mode_annihilation(space, j);
        let a2 = a.matrix() * a.matrix();
        g += (&a2 - a2.adjoint()) * C64::new(0.5 * rj, 0.0);
    }
    Ok(exp_anti_hermitian(space, g))
}

/// Phase rotation U_θ = exp(iθ a†a) on mode 0.
pub fn phase_rotation(theta: f64, space: TruncatedSpace) -> Operator {
    mode_phase_rotation(theta, space, 0)
}

pub fn mode_phase_rotation(theta: f64, space: TruncatedSpace, mode: usize) -> Operator {
    let d = space.dim();
    let diag = nalgebra::DVector::from_iterator(
        d,
        (0..d).map(|i| C64::new(0.0, theta * space.occupations(i)[mode] as f64).exp()),
    );
    Operator::from_matrix(space, DMatrix::from_diagonal(&diag))
}

/// ‖U†U − I‖ (Frobenius).
pub fn unitarity_defect(u: &Operator) -> f64 {
    let d = u.dim();
    (u.matrix().adjoint() * u.matrix() - DMatrix::<C64>::identity(d, d)).norm()
}

/// χ_ρ(ξ) = tr(ρ D_ξ) on a single-mode space.
pub fn characteristic_function(rho: &State, xi: C64) -> C64 {
    let d = displacement(xi, rho.space());
    rho.op().trace_product(&d)
}
