use nalgebra::{DMatrix, DVector};

use super::OUParams;
use crate::channels::{lindbladian_adjoint_with, Boundary};
use crate::fock::{thermal_state, Operator, Spectrum, State, ThermalParam, TruncatedSpace};
use crate::tol::EPS_PSD;
use crate::{Error, Result, C64};

/// Γ_σ^s(X) = σ^{s/2} X σ^{s/2} for a fixed reference σ.
#[derive(Debug, Clone)]
pub struct Gamma {
    space: TruncatedSpace,
    values: DVector<f64>,
    // None when σ is diagonal in the Fock basis
    vectors: Option<DMatrix<C64>>,
}

impl Gamma {
    pub fn new(sigma: &State) -> Result<Self> {
        let m = sigma.matrix();
        let n = m.nrows();
        let diagonal = (0..n).all(|j| (0..n).all(|i| i == j || m[(i, j)] == C64::new(0.0, 0.0)));
        let (values, vectors) = if diagonal {
            (DVector::from_fn(n, |i, _| m[(i, i)].re), None)
        } else {
            let spec = Spectrum::of(m);
            (spec.values, Some(spec.vectors))
        };
        let min = values.min();
        if min < -EPS_PSD {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        Ok(Self {
            space: sigma.space(),
            values: values.map(|v| v.max(0.0)),
            vectors,
        })
    }

    pub fn space(&self) -> TruncatedSpace {
        self.space
    }

    fn powers(&self, e: f64) -> Result<DVector<f64>> {
        if e < 0.0 {
            let min = self.values.min();
            if min <= 0.0 {
                return Err(Error::RankDeficient { min_eigenvalue: min });
            }
        }
        Ok(self.values.map(|v| if e == 0.0 { 1.0 } else { v.powf(e) }))
    }

    /// σ^e as a matrix.
    pub fn sigma_power(&self, e: f64) -> Result<DMatrix<C64>> {
        let d = self.powers(e)?;
        Ok(match &self.vectors {
            None => DMatrix::from_diagonal(&d.map(|v| C64::new(v, 0.0))),
            Some(v) => {
                let mut scaled = v.clone();
                for (j, &dj) in d.iter().enumerate() {
                    scaled.column_mut(j).scale_mut(dj);
                }
                scaled * v.adjoint()
            }
        })
    }

    /// Γ^s(X).
    pub fn apply(&self, s: f64, x: &Operator) -> Result<Operator> {
        if x.space() != self.space {
            return Err(Error::DimensionMismatch {
                expected: self.space.dim(),
                found: x.dim(),
            });
        }
        let out = match &self.vectors {
            None => {
                let d = self.powers(s / 2.0)?;
                DMatrix::from_fn(d.len(), d.len(), |i, j| x.matrix()[(i, j)] * (d[i] * d[j]))
            }
            Some(_) => {
                let h = self.sigma_power(s / 2.0)?;
                &h * x.matrix() * &h
            }
        };
        Ok(Operator::from_matrix(self.space, out))
    }

    /// ⟨X, Y⟩_σ = tr(σ^{1/2} X† σ^{1/2} Y).
    pub fn inner(&self, x: &Operator, y: &Operator) -> Result<C64> {
        let gx = self.apply(0.5, x)?;
        let gy = self.apply(0.5, y)?;
        Ok(gx.hs_inner(&gy))
    }

    /// ‖X‖_{p,σ} = (tr |Γ^{1/p}(X)|^p)^{1/p}.
    pub fn norm(&self, x: &Operator, p: f64) -> Result<f64> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "p",
                value: p,
                reason: "weighted norms need 1 ≤ p < ∞",
            });
        }
        let y = self.apply(1.0 / p, x)?;
        let sv = y.matrix().clone().singular_values();
        Ok(sv.iter().map(|s| s.powf(p)).sum::<f64>().powf(1.0 / p))
    }
}

/// ‖X‖_{p,σ}.
pub fn weighted_p_norm(x: &Operator, sigma: &State, p: f64) -> Result<f64> {
    Gamma::new(sigma)?.norm(x, p)
}

/// ⟨X, Y⟩_σ.
pub fn weighted_inner(x: &Operator, y: &Operator, sigma: &State) -> Result<C64> {
    Gamma::new(sigma)?.inner(x, y)
}

/// σ_β^{⊗m} restricted to the cutoff, not renormalised.
pub fn reference_state(ou: &OUParams, space: TruncatedSpace) -> Result<State> {
    let x = ThermalParam::from_beta(ou.beta())?;
    let single = thermal_state(x, TruncatedSpace::new(space.levels())?)?;
    let mut out = single.clone();
    for _ in 1..space.modes() {
        out = out.tensor(&single)?;
    }
    Ok(out)
}

/// ⟨X, L̂*(X)⟩_σ with the embedded boundary (exact for X inside the cutoff).
pub fn operator_dirichlet(x: &Operator, ou: &OUParams) -> Result<f64> {
    let gamma = Gamma::new(&reference_state(ou, x.space())?)?;
    let lx = lindbladian_adjoint_with(&ou.semigroup(), x, Boundary::Embedded);
    Ok(gamma.inner(x, &lx)?.re)
}

/// Γ_σ ∘ L* ∘ Γ_σ^{−1} applied to `rho`; equals L(ρ) under either boundary.
pub fn gamma_conjugated_lindbladian(rho: &Operator, ou: &OUParams, boundary: Boundary) -> Result<Operator> {
    let gamma = Gamma::new(&reference_state(ou, rho.space())?)?;
    let inner = gamma.apply(-1.0, rho)?;
    let l = lindbladian_adjoint_with(&ou.semigroup(), &inner, boundary);
    gamma.apply(1.0, &l)
}
