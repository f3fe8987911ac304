use nalgebra::{DMatrix, DVector};

use super::lindblad::apply_entrywise;
use super::{lindbladian_apply, sector_generators, Boundary, SemigroupParams};
use crate::fock::{Operator, Spectrum, State};
use crate::tol::CLIP_RENORMALIZE;
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvolveMethod {
    /// Exact exponential of the superoperator's sector blocks.
    #[default]
    Exponential,
    /// Adaptive Dormand-Prince 5(4) integration of ρ̇ = −L(ρ).
    RungeKutta,
}

/// Output of [`evolve`].
#[derive(Debug, Clone)]
pub struct Evolution {
    pub state: State,
    /// Eigenvalue mass removed by the PSD re-projection.
    pub clipped_mass: f64,
    /// Probability the untruncated flow would have pushed past the cutoff.
    pub leaked_mass: f64,
    /// Clipped mass exceeded the renormalisation threshold.
    pub flagged: bool,
}

/// Φ_t = e^{−tL} for fixed (ν₀, ν₁, N, t), stored as one block per diagonal.
#[derive(Debug, Clone)]
pub struct Propagator {
    levels: usize,
    t: f64,
    blocks: Vec<DMatrix<f64>>,
    leak: DVector<f64>,
}

impl Propagator {
    pub fn new(p: &SemigroupParams, levels: usize, t: f64) -> Result<Self> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "t",
                value: t,
                reason: "time must be finite and non-negative",
            });
        }
        let gens = sector_generators(p, levels, Boundary::Closed);
        let mut blocks = Vec::with_capacity(levels);
        // population block augmented with the integrated birth flux out of
        // level N−1, which the closed truncation blocks
        let m0 = gens.block(0);
        let mut aug = DMatrix::<f64>::zeros(levels + 1, levels + 1);
        aug.view_mut((0, 0), (levels, levels)).copy_from(&(-t * m0));
        aug[(levels, levels - 1)] = t * p.nu0() * levels as f64;
        let e = aug.exp();
        blocks.push(e.view((0, 0), (levels, levels)).into_owned());
        let leak = DVector::from_fn(levels, |k, _| e[(levels, k)]);
        for ell in 1..levels {
            blocks.push((-t * gens.block(ell as isize)).exp());
        }
        Ok(Self {
            levels,
            t,
            blocks,
            leak,
        })
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    fn check(&self, op: &Operator) -> Result<()> {
        if op.space().modes() != 1 || op.space().levels() != self.levels {
            return Err(Error::DimensionMismatch {
                expected: self.levels,
                found: op.dim(),
            });
        }
        Ok(())
    }

    fn map_sectors(&self, m: &DMatrix<C64>, transpose: bool) -> DMatrix<C64> {
        let n = self.levels;
        let mut out = DMatrix::<C64>::zeros(n, n);
        for (ell, block) in self.blocks.iter().enumerate() {
            let len = n - ell;
            let upper = DVector::from_fn(len, |k, _| m[(k, k + ell)]);
            let lower = DVector::from_fn(len, |k, _| m[(k + ell, k)]);
            let (up, lo) = if transpose {
                (
                    real_times(&block.transpose(), &upper),
                    real_times(&block.transpose(), &lower),
                )
            } else {
                (real_times(block, &upper), real_times(block, &lower))
            };
            for k in 0..len {
                out[(k, k + ell)] = up[k];
                out[(k + ell, k)] = lo[k];
            }
        }
        out
    }

    /// Φ_t(ρ) without any re-projection.
    pub fn apply(&self, op: &Operator) -> Result<Operator> {
        self.check(op)?;
        Ok(Operator::from_matrix(op.space(), self.map_sectors(op.matrix(), false)))
    }

    /// Heisenberg picture Φ_t*(X).
    pub fn apply_adjoint(&self, op: &Operator) -> Result<Operator> {
        self.check(op)?;
        Ok(Operator::from_matrix(op.space(), self.map_sectors(op.matrix(), true)))
    }

    /// Leaked probability accumulated over [0, t] for input `op`.
    pub fn leaked(&self, op: &Operator) -> f64 {
        (0..self.levels)
            .map(|k| self.leak[k] * op.matrix()[(k, k)].re)
            .sum::<f64>()
            .max(0.0)
    }

    /// Evolve a state, re-project and account for leakage.
    pub fn evolve(&self, rho: &State) -> Result<Evolution> {
        let raw = self.apply(rho.op())?;
        let leaked = self.leaked(rho.op());
        Ok(finish(rho, raw, leaked))
    }
}

fn real_times(m: &DMatrix<f64>, v: &DVector<C64>) -> DVector<C64> {
    let re = DVector::from_iterator(v.len(), v.iter().map(|z| z.re));
    let im = DVector::from_iterator(v.len(), v.iter().map(|z| z.im));
    let a = m * re;
    let b = m * im;
    DVector::from_fn(v.len(), |k, _| C64::new(a[k], b[k]))
}

/// PSD re-projection: clip negative eigenvalues; rescale to the original
/// trace only when the clipped mass is below the renormalisation threshold.
fn finish(input: &State, raw: Operator, leaked: f64) -> Evolution {
    let raw = raw.hermitian_part();
    let target_trace = input.trace();
    let spec = Spectrum::of(raw.matrix());
    let clipped: f64 = spec.values.iter().filter(|&&l| l < 0.0).map(|l| -l).sum();
    let tail = input.tail_mass() + leaked;
    if clipped == 0.0 {
        return Evolution {
            state: State::trusted(raw, tail),
            clipped_mass: 0.0,
            leaked_mass: leaked,
            flagged: false,
        };
    }
    let proj = Operator::from_matrix(raw.space(), spec.map(|l| l.max(0.0)));
    let flagged = clipped >= CLIP_RENORMALIZE;
    let state = if flagged {
        proj
    } else {
        let tr = proj.trace().re;
        proj.scale_real(target_trace / tr)
    };
    Evolution {
        state: State::trusted(state, tail),
        clipped_mass: clipped,
        leaked_mass: leaked,
        flagged,
    }
}

/// Φ_t(ρ) with the default (exponential) method.
pub fn evolve(rho: &State, t: f64, p: &SemigroupParams) -> Result<Evolution> {
    evolve_with(rho, t, p, EvolveMethod::Exponential)
}

pub fn evolve_with(rho: &State, t: f64, p: &SemigroupParams, method: EvolveMethod) -> Result<Evolution> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "t",
            value: t,
            reason: "time must be finite and non-negative",
        });
    }
    if rho.space().modes() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: rho.space().modes(),
        });
    }
    if t == 0.0 {
        return Ok(Evolution {
            state: rho.clone(),
            clipped_mass: 0.0,
            leaked_mass: 0.0,
            flagged: false,
        });
    }
    match method {
        EvolveMethod::Exponential => Propagator::new(p, rho.space().levels(), t)?.evolve(rho),
        EvolveMethod::RungeKutta => {
            let (m, leaked) = dormand_prince(p, rho.matrix(), t);
            Ok(finish(rho, Operator::from_matrix(rho.space(), m), leaked))
        }
    }
}

const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates ρ̇ = −L(ρ) together with the leak accumulator.
fn dormand_prince(p: &SemigroupParams, rho0: &DMatrix<C64>, t_end: f64) -> (DMatrix<C64>, f64) {
    const RTOL: f64 = 1e-12;
    const ATOL: f64 = 1e-14;
    let n = rho0.nrows();
    let rate = p.nu0() * n as f64;
    let rhs = |m: &DMatrix<C64>| -> (DMatrix<C64>, f64) {
        (-apply_entrywise(p, m, Boundary::Closed), rate * m[(n - 1, n - 1)].re)
    };
    let mut y = rho0.clone();
    let mut leak = 0.0;
    let mut t = 0.0;
    let scale = rho0.camax().max(1e-300);
    let mut h = (1e-3 / (1.0 + p.nu0() + p.nu1()) / n as f64).min(t_end);
    while t < t_end {
        if t + h > t_end {
            h = t_end - t;
        }
        let mut k: Vec<(DMatrix<C64>, f64)> = Vec::with_capacity(7);
        k.push(rhs(&y));
        for (s, row) in A.iter().enumerate() {
            let mut ys = y.clone();
            for (j, &a) in row.iter().enumerate().take(s + 1) {
                if a != 0.0 {
                    ys += &k[j].0 * C64::new(h * a, 0.0);
                }
            }
            k.push(rhs(&ys));
        }
        let mut y5 = y.clone();
        let mut err = DMatrix::<C64>::zeros(n, n);
        let mut dleak = 0.0;
        for i in 0..7 {
            if B5[i] != 0.0 {
                y5 += &k[i].0 * C64::new(h * B5[i], 0.0);
                dleak += h * B5[i] * k[i].1;
            }
            let d = B5[i] - B4[i];
            if d != 0.0 {
                err += &k[i].0 * C64::new(h * d, 0.0);
            }
        }
        let tol = ATOL + RTOL * scale;
        let e = err.camax() / tol;
        if e <= 1.0 {
            t += h;
            y = y5;
            leak += dleak;
        }
        let factor = if e == 0.0 {
            5.0
        } else {
            (0.9 * e.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
    }
    (y, leak)
}

/// ‖(Φ_dt(ρ) − ρ)/dt + L(ρ)‖_F over levels 0…N−2.
pub fn generator_fd_check(p: &SemigroupParams, rho: &State, dt: f64) -> Result<f64> {
    if dt.is_nan() || dt <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "dt",
            value: dt,
            reason: "step must be positive",
        });
    }
    let n = rho.space().levels();
    let prop = Propagator::new(p, n, dt)?;
    let stepped = prop.apply(rho.op())?;
    let l = lindbladian_apply(p, rho.op());
    let resid = (stepped.matrix() - rho.matrix()) / C64::new(dt, 0.0) + l.matrix();
    Ok(resid.view((0, 0), (n - 1, n - 1)).norm())
}
