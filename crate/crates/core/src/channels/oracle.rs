use super::PhaseCovariantParams;
use crate::fock::ThermalParam;
use crate::{Error, Result, C64};

/// Phase-symmetric Gaussian state with χ(ξ) = exp(ξ m̄ − ξ̄ m − ½c|ξ|²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianStateParams {
    pub mean: C64,
    c: f64,
}

impl GaussianStateParams {
    pub fn new(mean: C64, c: f64) -> Result<Self> {
        if !(c >= 1.0 - 1e-12 && c.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "c",
                value: c,
                reason: "variance parameter must be at least 1",
            });
        }
        Ok(Self { mean, c })
    }

    /// Centred thermal state: c = coth(β/2) = (1+x)/(1−x).
    pub fn thermal(x: ThermalParam) -> Self {
        Self {
            mean: C64::new(0.0, 0.0),
            c: (1.0 + x.x()) / (1.0 - x.x()),
        }
    }

    pub fn vacuum() -> Self {
        Self {
            mean: C64::new(0.0, 0.0),
            c: 1.0,
        }
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Photon number of the centred part, (c−1)/2.
    pub fn thermal_photons(&self) -> f64 {
        0.5 * (self.c - 1.0)
    }

    /// Thermal parameter of the centred part; `None` for the vacuum.
    pub fn thermal_param(&self) -> Option<ThermalParam> {
        ThermalParam::new((self.c - 1.0) / (self.c + 1.0)).ok()
    }

    /// Entropy of the centred part, g(n) = (n+1)ln(n+1) − n ln n.
    pub fn entropy(&self) -> f64 {
        let n = self.thermal_photons().max(0.0);
        if n == 0.0 {
            0.0
        } else {
            (n + 1.0) * n.ln_1p() - n * n.ln()
        }
    }
}

/// mean ↦ √λ·mean, c ↦ λc + γ.
pub fn gaussian_channel_action(g: &GaussianStateParams, p: &PhaseCovariantParams) -> Result<GaussianStateParams> {
    let p = PhaseCovariantParams::new(p.lambda(), p.gamma())?;
    GaussianStateParams::new(g.mean * p.lambda().sqrt(), p.lambda() * g.c + p.gamma())
}
