//! Entropy flow along phase-covariant semigroups: entropy-matched thermal
//! states, the scalar objective f_α and its stationarity function g, and the
//! trajectory comparison S(Φ_t(ρ)) ≥ S(Φ_t(τ)).

use serde::Serialize;

use crate::channels::{lindbladian_apply, Propagator, SemigroupParams};
use crate::fock::{regularize, thermal_state, von_neumann_entropy, State, ThermalParam, TruncatedSpace};
use crate::meta_lsi::{eta_th, UpsilonParams};
use crate::par::Execution;
use crate::tol::TAIL_GUARD;
use crate::{Error, Regularized, Result};

/// ν₀ substituted for a quantum-limited attenuator (ν₀ = 0) wherever g is
/// needed; g is bounded on (0,1) at ν₀ = 0.
pub const QUANTUM_LIMITED_NU0: f64 = 1e-6;

/// S(τ) for the thermal state of mean photon number n:
/// (n+1)ln(n+1) − n ln n.
pub fn photon_entropy(n: f64) -> f64 {
    if n <= 0.0 {
        return 0.0;
    }
    n.ln_1p() + n * n.recip().ln_1p()
}

/// S(τ_x) = −x ln x/(1−x) − ln(1−x), with S(τ_0) = 0.
pub fn thermal_entropy(x: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(ThermalParam::new(x)?.entropy())
}

/// Mean photon number of the thermal state with entropy `s`.
pub fn thermal_match_photons(s: f64) -> Result<f64> {
    if !(s >= 0.0 && s.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "S_target",
            value: s,
            reason: "entropy must be finite and non-negative",
        });
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while photon_entropy(hi) < s {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if photon_entropy(mid) < s {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Thermal parameter with S(τ_x) = s. At s = 0 this is the vacuum limit,
/// returned as the smallest positive x.
pub fn thermal_match_entropy(s: f64) -> Result<ThermalParam> {
    let n = thermal_match_photons(s)?;
    ThermalParam::new((n / (n + 1.0)).max(f64::MIN_POSITIVE))
}

/// dS(Φ_t(ρ))/dt at t = 0, ⟨L(ρ), ln ρ⟩, with the closed generator on the
/// regularised state.
pub fn entropy_derivative(rho: &State, p: &SemigroupParams) -> Result<Regularized> {
    let (reg, spec, eps) = regularize(rho);
    let log = crate::fock::Operator::from_matrix(reg.space(), spec.log()?);
    let l = lindbladian_apply(p, reg.op());
    Ok(Regularized {
        value: l.trace_product(&log).re,
        mixing: eps,
    })
}

/// (S(Φ_dt(ρ)) − S(ρ))/dt.
pub fn entropy_derivative_fd(rho: &State, p: &SemigroupParams, dt: f64) -> Result<f64> {
    let ev = Propagator::new(p, rho.space().levels(), dt)?.evolve(rho)?;
    Ok((von_neumann_entropy(&ev.state) - von_neumann_entropy(rho)) / dt)
}

fn check_x(x: f64) -> Result<()> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::InvalidParameter {
            name: "x",
            value: x,
            reason: "must lie in (0,1)",
        });
    }
    Ok(())
}

/// f_α(x) = [(ν₁x−ν₀)ln x − αx ln x − α(1−x)ln(1−x)]/(1−x), the value of
/// dS/dt + αS on τ_x.
pub fn f_alpha(x: f64, alpha: f64, p: &SemigroupParams) -> Result<f64> {
    check_x(x)?;
    let lx = x.ln();
    let l1x = (-x).ln_1p();
    Ok(((p.nu1() * x - p.nu0()) * lx - alpha * x * lx - alpha * (1.0 - x) * l1x) / (1.0 - x))
}

/// f_α′(x) = [(ν₁−ν₀)ln x + (1−x)(ν₁x−ν₀)/x − α ln x]/(1−x)².
pub fn f_alpha_dx(x: f64, alpha: f64, p: &SemigroupParams) -> Result<f64> {
    check_x(x)?;
    let lx = x.ln();
    let num = (p.nu1() - p.nu0()) * lx + (1.0 - x) * (p.nu1() * x - p.nu0()) / x - alpha * lx;
    Ok(num / ((1.0 - x) * (1.0 - x)))
}

/// g(x) = ν₁ − ν₀ + (1−x)(ν₁x−ν₀)/(x ln x); f_α′(x) = ln x (g(x) − α)/(1−x)².
pub fn g(x: f64, p: &SemigroupParams) -> Result<f64> {
    check_x(x)?;
    Ok(p.nu1() - p.nu0() + (1.0 - x) * (p.nu1() * x - p.nu0()) / (x * x.ln()))
}

/// `p` with ν₀ = 0 replaced by [`QUANTUM_LIMITED_NU0`].
pub fn with_positive_nu0(p: &SemigroupParams) -> Result<SemigroupParams> {
    if p.nu0() > 0.0 {
        Ok(*p)
    } else {
        SemigroupParams::new(QUANTUM_LIMITED_NU0, p.nu1())
    }
}

/// The unique x ∈ (0,1) with g(x) = α, by bisection on ln x.
pub fn solve_g(alpha: f64, p: &SemigroupParams) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "must be positive and finite",
        });
    }
    if p.nu0() <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "nu0",
            value: p.nu0(),
            reason: "g is bounded when ν₀ = 0; see with_positive_nu0",
        });
    }
    let gx = |u: f64| {
        let x = u.exp();
        p.nu1() - p.nu0() + (1.0 - x) * (p.nu1() * x - p.nu0()) / (x * u)
    };
    // g(e^lo) > α > g(e^hi)
    let mut lo = -700.0;
    let mut hi = -f64::EPSILON;
    if gx(lo) <= alpha || gx(hi) >= alpha {
        return Err(Error::Precondition(format!(
            "α = {alpha} outside the range of g resolvable in double precision"
        )));
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if gx(mid) > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

/// Entropies along Φ_t of ρ and of its entropy-matched thermal state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub s_rho: Vec<f64>,
    pub s_tau: Vec<f64>,
    /// s_rho − s_tau.
    pub margins: Vec<f64>,
    /// Mean photon number of the thermal comparison state.
    pub photons: Vec<f64>,
    /// Tail plus leaked mass of the evolved state.
    pub tail: Vec<f64>,
    /// |S(τ) − S(ρ)| at t = 0.
    pub matching_error: f64,
    /// The tail guard stopped the flow before `requested_t_max`.
    pub truncated: bool,
    /// Some step clipped more than the renormalisation threshold.
    pub clipped: bool,
    pub requested_t_max: f64,
}

impl Trajectory {
    pub fn min_margin(&self) -> f64 {
        self.margins.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// No truncation flag was raised.
    pub fn conclusive(&self) -> bool {
        !self.truncated && !self.clipped
    }
}

/// Evolve ρ on an even grid of `steps` intervals over [0, t_max] and compare
/// with the analytic thermal flow from the entropy-matched τ. The flow stops
/// at the last grid time whose tail stays within the guard.
pub fn cmoe_verify(rho: &State, p: &SemigroupParams, t_max: f64, steps: usize) -> Result<Trajectory> {
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "t_max",
            value: t_max,
            reason: "must be positive and finite",
        });
    }
    if steps == 0 {
        return Err(Error::InvalidParameter {
            name: "steps",
            value: 0.0,
            reason: "need at least one step",
        });
    }
    let dt = t_max / steps as f64;
    let step = Propagator::new(p, rho.space().levels(), dt)?;
    let s0 = von_neumann_entropy(rho).max(0.0);
    let n0 = thermal_match_photons(s0)?;
    let mut out = Trajectory {
        times: Vec::with_capacity(steps + 1),
        s_rho: Vec::with_capacity(steps + 1),
        s_tau: Vec::with_capacity(steps + 1),
        margins: Vec::with_capacity(steps + 1),
        photons: Vec::with_capacity(steps + 1),
        tail: Vec::with_capacity(steps + 1),
        matching_error: (photon_entropy(n0) - s0).abs(),
        truncated: false,
        clipped: false,
        requested_t_max: t_max,
    };
    let mut state = rho.clone();
    for i in 0..=steps {
        if i > 0 {
            let ev = step.evolve(&state)?;
            out.clipped |= ev.flagged;
            state = ev.state;
        }
        if state.tail_mass() > TAIL_GUARD {
            out.truncated = true;
            break;
        }
        let t = i as f64 * dt;
        let n = p.mean_photon_flow(n0, t);
        let s_rho = von_neumann_entropy(&state);
        let s_tau = photon_entropy(n);
        out.times.push(t);
        out.s_rho.push(s_rho);
        out.s_tau.push(s_tau);
        out.margins.push(s_rho - s_tau);
        out.photons.push(n);
        out.tail.push(state.tail_mass());
    }
    Ok(out)
}

/// |S(Φ_t(τ_x)) on the Fock grid − S from the analytic thermal flow|.
pub fn thermal_flow_deviation(x: ThermalParam, p: &SemigroupParams, levels: usize, t: f64) -> Result<f64> {
    let tau = thermal_state(x, TruncatedSpace::new(levels)?)?;
    let ev = Propagator::new(p, levels, t)?.evolve(&tau)?;
    let analytic = photon_entropy(p.mean_photon_flow(x.mean_photon(), t));
    Ok((von_neumann_entropy(&ev.state) - analytic).abs())
}

/// inf over states of dS/dt|₀ + αS(ρ) against its thermal value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem52Report {
    pub alpha: f64,
    /// min_x f_α(x) = f_α(x*), x* = solve_g(α).
    pub eta_th: f64,
    pub argmin_x: f64,
    /// α·η_th of Υ with (ν₀/α, ν₁/α, ω = 0, p = 1), from the grid minimiser.
    pub eta_th_upsilon: f64,
    /// Objective on the truncated thermal saturator τ_{x*} minus η_th.
    pub saturator_gap: f64,
    pub samples: usize,
    pub min_objective: f64,
    /// min_objective − η_th.
    pub margin: f64,
    /// Largest regularisation weight used on a sample.
    pub mixing: f64,
}

fn objective(rho: &State, p: &SemigroupParams, alpha: f64) -> Result<(f64, f64)> {
    let d = entropy_derivative(rho, p)?;
    Ok((d.value + alpha * von_neumann_entropy(rho), d.mixing))
}

/// Evaluate dS/dt + αS on every sample and on the thermal saturator.
/// `samples` must be non-empty and share one single-mode space.
pub fn theorem52_check(p: &SemigroupParams, alpha: f64, samples: &[State], exec: Execution) -> Result<Theorem52Report> {
    let first = samples
        .first()
        .ok_or_else(|| Error::Precondition("no samples".into()))?;
    let x = solve_g(alpha, p)?;
    let eta = f_alpha(x, alpha, p)?;
    let up = UpsilonParams::new(p.nu0() / alpha, p.nu1() / alpha, 0.0, 1.0)?;
    let eta_up = alpha * eta_th(&up).value;
    let tau = thermal_state(ThermalParam::new(x)?, first.space())?;
    let saturator_gap = objective(&tau, p, alpha)?.0 - eta;
    let vals = exec.map(samples.len(), |i| objective(&samples[i], p, alpha));
    let mut min_objective = f64::INFINITY;
    let mut mixing: f64 = 0.0;
    for v in vals {
        let (o, m) = v?;
        min_objective = min_objective.min(o);
        mixing = mixing.max(m);
    }
    Ok(Theorem52Report {
        alpha,
        eta_th: eta,
        argmin_x: x,
        eta_th_upsilon: eta_up,
        saturator_gap,
        samples: samples.len(),
        min_objective,
        margin: min_objective - eta,
        mixing,
    })
}
