use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Lindbladian weights (ν₀, ν₁).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SemigroupParams {
    nu0: f64,
    nu1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelClass {
    Attenuator,
    Additive,
    Amplifier,
}

impl std::fmt::Display for ChannelClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ChannelClass::Attenuator => "attenuator",
            ChannelClass::Additive => "additive",
            ChannelClass::Amplifier => "amplifier",
        })
    }
}

impl std::str::FromStr for ChannelClass {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "attenuator" | "att" => Ok(ChannelClass::Attenuator),
            "additive" | "additive-noise" | "add" => Ok(ChannelClass::Additive),
            "amplifier" | "amp" => Ok(ChannelClass::Amplifier),
            other => Err(format!("unknown channel class `{other}`")),
        }
    }
}

impl SemigroupParams {
    pub fn new(nu0: f64, nu1: f64) -> Result<Self> {
        for (name, v) in [("nu0", nu0), ("nu1", nu1)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    value: v,
                    reason: "Lindbladian weights must be finite and non-negative",
                });
            }
        }
        Ok(Self { nu0, nu1 })
    }

    /// Quantum Ornstein-Uhlenbeck weights ν₀ = e^{−β/2}, ν₁ = e^{β/2}.
    pub fn ornstein_uhlenbeck(beta: f64) -> Result<Self> {
        check_beta(beta)?;
        Self::new((-beta / 2.0).exp(), (beta / 2.0).exp())
    }

    pub fn nu0(&self) -> f64 {
        self.nu0
    }

    pub fn nu1(&self) -> f64 {
        self.nu1
    }

    pub fn class(&self) -> ChannelClass {
        if self.nu1 > self.nu0 {
            ChannelClass::Attenuator
        } else if self.nu1 == self.nu0 {
            ChannelClass::Additive
        } else {
            ChannelClass::Amplifier
        }
    }

    /// Fixed-point parameter x = ν₀/ν₁ for attenuators.
    pub fn fixed_point(&self) -> Option<f64> {
        (self.nu1 > self.nu0 && self.nu0 > 0.0).then(|| self.nu0 / self.nu1)
    }

    /// Mean photon number after time `t` from `n0` under ṅ = −(ν₁−ν₀)n + ν₀.
    pub fn mean_photon_flow(&self, n0: f64, t: f64) -> f64 {
        let k = self.nu1 - self.nu0;
        if k == 0.0 {
            n0 + self.nu0 * t
        } else {
            // n(t) = e^{−kt} n0 + ν₀ (1 − e^{−kt})/k, written with expm1 for small kt
            let decay = (-k * t).exp();
            decay * n0 - self.nu0 * (-k * t).exp_m1() / k
        }
    }
}

/// (λ, γ) of χ_{Φ(ρ)}(ξ) = e^{−½γ|ξ|²} χ_ρ(√λ ξ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseCovariantParams {
    lambda: f64,
    gamma: f64,
}

impl PhaseCovariantParams {
    /// Rejects parameters violating complete positivity γ ≥ |1−λ|.
    pub fn new(lambda: f64, gamma: f64) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                value: lambda,
                reason: "must be finite and non-negative",
            });
        }
        if !(gamma.is_finite() && gamma >= (1.0 - lambda).abs() - 1e-12 * (1.0 + lambda)) {
            return Err(Error::InvalidParameter {
                name: "gamma",
                value: gamma,
                reason: "complete positivity requires gamma >= |1 - lambda|",
            });
        }
        Ok(Self { lambda, gamma })
    }

    pub fn identity() -> Self {
        Self {
            lambda: 1.0,
            gamma: 0.0,
        }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
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

fn check_tc(t: f64, c: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "t",
            value: t,
            reason: "time must be finite and non-negative",
        });
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "c",
            value: c,
            reason: "rate must be positive and finite",
        });
    }
    Ok(())
}

fn coth(x: f64) -> f64 {
    1.0 / x.tanh()
}

/// λ_t = e^{−2ct}, γ_t = coth(β/2)(1−λ_t).
pub fn attenuator_params(t: f64, c: f64, beta: f64) -> Result<PhaseCovariantParams> {
    check_tc(t, c)?;
    check_beta(beta)?;
    let lambda = (-2.0 * c * t).exp();
    let gamma = -coth(beta / 2.0) * (-2.0 * c * t).exp_m1();
    PhaseCovariantParams::new(lambda, gamma)
}

/// λ_t = e^{2ct}, γ_t = coth(β/2)(λ_t−1).
pub fn amplifier_params(t: f64, c: f64, beta: f64) -> Result<PhaseCovariantParams> {
    check_tc(t, c)?;
    check_beta(beta)?;
    let lambda = (2.0 * c * t).exp();
    let gamma = coth(beta / 2.0) * (2.0 * c * t).exp_m1();
    PhaseCovariantParams::new(lambda, gamma)
}

/// λ_t = 1, γ_t = 2ct.
pub fn additive_params(t: f64, c: f64) -> Result<PhaseCovariantParams> {
    check_tc(t, c)?;
    PhaseCovariantParams::new(1.0, 2.0 * c * t)
}

/// ν₀ = c(coth(β/2)−1), ν₁ = c(coth(β/2)+1).
pub fn attenuator_semigroup(c: f64, beta: f64) -> Result<SemigroupParams> {
    check_tc(0.0, c)?;
    check_beta(beta)?;
    let k = coth(beta / 2.0);
    SemigroupParams::new(c * (k - 1.0), c * (k + 1.0))
}

pub fn amplifier_semigroup(c: f64, beta: f64) -> Result<SemigroupParams> {
    let p = attenuator_semigroup(c, beta)?;
    SemigroupParams::new(p.nu1, p.nu0)
}

pub fn additive_semigroup(c: f64) -> Result<SemigroupParams> {
    check_tc(0.0, c)?;
    SemigroupParams::new(c, c)
}

/// One of the three one-parameter families, with rate `c` and (for
/// attenuator / amplifier) the inverse temperature β of the environment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelFamily {
    pub class: ChannelClass,
    pub c: f64,
    pub beta: f64,
}

impl ChannelFamily {
    /// Family with the default rate c = sinh(β/2), which makes the
    /// attenuator the Ornstein-Uhlenbeck semigroup.
    pub fn with_default_rate(class: ChannelClass, beta: f64) -> Self {
        Self {
            class,
            c: (beta / 2.0).sinh(),
            beta,
        }
    }

    pub fn semigroup(&self) -> Result<SemigroupParams> {
        match self.class {
            ChannelClass::Attenuator => attenuator_semigroup(self.c, self.beta),
            ChannelClass::Amplifier => amplifier_semigroup(self.c, self.beta),
            ChannelClass::Additive => additive_semigroup(self.c),
        }
    }

    pub fn at(&self, t: f64) -> Result<PhaseCovariantParams> {
        match self.class {
            ChannelClass::Attenuator => attenuator_params(t, self.c, self.beta),
            ChannelClass::Amplifier => amplifier_params(t, self.c, self.beta),
            ChannelClass::Additive => additive_params(t, self.c),
        }
    }
}
