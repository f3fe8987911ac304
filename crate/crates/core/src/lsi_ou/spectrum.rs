use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::Serialize;

use super::norms::{operator_dirichlet, reference_state, Gamma};
use super::OUParams;
use crate::channels::{lindbladian_adjoint_with, sector_generators, Boundary};
use crate::fock::{mode_annihilation, Operator, TruncatedSpace};
use crate::{Error, Result, C64};

/// Hermite polynomial h_k of the generating function
/// e^{st − (w/4)s²} = Σ s^k h_k(t)/k!, with width w = coth(β/2).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HermitePoly {
    degree: usize,
    width: f64,
    /// Coefficient of t^i at index i.
    coeffs: Vec<f64>,
}

impl HermitePoly {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Coefficients read off the generating function directly:
    /// h_k(t) = k! Σ_j t^{k−2j}(−w/4)^j / ((k−2j)! j!).
    pub fn from_series(k: usize, beta: f64) -> Result<Self> {
        let width = coth_half(beta)?;
        let fact = |n: usize| (1..=n).map(|i| i as f64).product::<f64>();
        let mut coeffs = vec![0.0; k + 1];
        for j in 0..=k / 2 {
            coeffs[k - 2 * j] = fact(k) * (-width / 4.0).powi(j as i32) / (fact(k - 2 * j) * fact(j));
        }
        Ok(Self {
            degree: k,
            width,
            coeffs,
        })
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    /// h_k(Q) by Horner's rule.
    pub fn eval_operator(&self, q: &Operator) -> Operator {
        let space = q.space();
        let d = space.dim();
        let mut acc = DMatrix::<C64>::zeros(d, d);
        for &c in self.coeffs.iter().rev() {
            acc = &acc * q.matrix();
            for i in 0..d {
                acc[(i, i)] += C64::new(c, 0.0);
            }
        }
        Operator::from_matrix(space, acc)
    }
}

fn coth_half(beta: f64) -> Result<f64> {
    OUParams::new(beta)?;
    Ok(1.0 / (beta / 2.0).tanh())
}

/// h_k by the three-term recurrence h_{k+1} = t h_k − (w/2) k h_{k−1}.
pub fn hermite(k: usize, beta: f64) -> Result<HermitePoly> {
    let width = coth_half(beta)?;
    let mut prev = vec![1.0];
    let mut cur = vec![0.0, 1.0];
    if k == 0 {
        cur = prev.clone();
    }
    for n in 1..k {
        let mut next = vec![0.0; n + 2];
        for (i, &c) in cur.iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i] -= width / 2.0 * n as f64 * c;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(HermitePoly {
        degree: k,
        width,
        coeffs: cur,
    })
}

/// q_z = (z a† + z̄ a)/√2 on mode `mode`, |z| = 1.
pub fn mode_quadrature(z: C64, space: TruncatedSpace, mode: usize) -> Result<Operator> {
    if (z.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter {
            name: "z",
            value: z.norm(),
            reason: "quadrature direction must have unit modulus",
        });
    }
    let a = mode_annihilation(space, mode);
    let m = (a.matrix().adjoint() * z + a.matrix() * z.conj()) / C64::new(2f64.sqrt(), 0.0);
    Ok(Operator::from_matrix(space, m))
}

pub fn quadrature(z: C64, space: TruncatedSpace) -> Result<Operator> {
    mode_quadrature(z, space, 0)
}

/// Residuals of L*(h_k(q_z)) = sinh(β/2) k h_k(q_z) in a truncated space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenResidual {
    pub eigenvalue: f64,
    /// Relative Frobenius residual on levels 0…N−k−2, where the truncated
    /// polynomial is exact.
    pub interior: f64,
    /// Relative residual in the σ-weighted 2-norm over the whole space;
    /// measures the truncation error at the top levels.
    pub weighted: f64,
}

pub fn eigen_check(k: usize, z: C64, ou: &OUParams, levels: usize) -> Result<EigenResidual> {
    if levels < k + 3 {
        return Err(Error::InvalidParameter {
            name: "levels",
            value: levels as f64,
            reason: "need at least k + 3 levels for a non-empty interior block",
        });
    }
    let space = TruncatedSpace::new(levels)?;
    let h = hermite(k, ou.beta())?;
    let v = h.eval_operator(&quadrature(z, space)?);
    let lambda = ou.gap() * k as f64;
    let lv = lindbladian_adjoint_with(&ou.semigroup(), &v, Boundary::Embedded);
    let r = &lv - &v.scale_real(lambda);
    let inner = levels - k - 1;
    let r_in = r.matrix().view((0, 0), (inner, inner)).norm();
    let v_in = v.matrix().view((0, 0), (inner, inner)).norm();
    let gamma = Gamma::new(&reference_state(ou, space)?)?;
    let r_w = gamma.inner(&r, &r)?.re.max(0.0).sqrt();
    let v_w = gamma.inner(&v, &v)?.re.sqrt();
    Ok(EigenResidual {
        eigenvalue: lambda,
        interior: r_in / v_in,
        weighted: r_w / v_w,
    })
}

/// Low-lying spectrum of the single-mode L* after discarding eigenmodes that
/// live near the cutoff.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralGap {
    /// Smallest retained eigenvalue above the zero mode.
    pub value: f64,
    /// Smallest retained eigenvalue of the diagonal sector (≈ 0).
    pub zero_mode: f64,
    pub retained: usize,
    pub discarded: usize,
}

/// Squared weight an eigenmode may carry on the top quarter of levels.
const INTERIOR_MASS: f64 = 1e-10;

pub fn spectral_gap(ou: &OUParams, levels: usize) -> Result<SpectralGap> {
    if levels < 8 {
        return Err(Error::InvalidParameter {
            name: "levels",
            value: levels as f64,
            reason: "need at least 8 levels",
        });
    }
    let gens = sector_generators(&ou.semigroup(), levels, Boundary::Embedded);
    let top = levels - levels.div_ceil(4);
    let mut retained = 0;
    let mut discarded = 0;
    let mut diagonal = Vec::new();
    let mut off = f64::INFINITY;
    for ell in 0..levels {
        let (vals, vecs) = gens.symmetric_eigen(ell);
        for (j, &lam) in vals.iter().enumerate() {
            let col = vecs.column(j);
            let tail: f64 = (0..col.len())
                .filter(|&k| k + ell >= top)
                .map(|k| col[k] * col[k])
                .sum();
            if tail > INTERIOR_MASS * col.norm_squared() {
                discarded += 1;
                continue;
            }
            retained += 1;
            if ell == 0 {
                diagonal.push(lam);
            } else {
                off = off.min(lam);
            }
        }
    }
    diagonal.sort_by(f64::total_cmp);
    let zero_mode = *diagonal.first().ok_or(Error::Precondition(
        "no interior eigenmode in the diagonal sector".into(),
    ))?;
    let value = diagonal.get(1).copied().unwrap_or(f64::INFINITY).min(off);
    Ok(SpectralGap {
        value,
        zero_mode,
        retained,
        discarded,
    })
}

/// X = Σ_ℓ X_ℓ with X_ℓ holding the entries ⟨n|X|n+ℓ⟩, ℓ ∈ ℤ^m.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalDecomposition {
    space: TruncatedSpace,
    blocks: BTreeMap<Vec<isize>, Operator>,
}

impl DiagonalDecomposition {
    pub fn space(&self) -> TruncatedSpace {
        self.space
    }

    /// Non-zero blocks keyed by offset.
    pub fn blocks(&self) -> &BTreeMap<Vec<isize>, Operator> {
        &self.blocks
    }

    pub fn block(&self, offset: &[isize]) -> Option<&Operator> {
        self.blocks.get(offset)
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn reconstruct(&self) -> Operator {
        let mut out = Operator::zeros(self.space);
        for b in self.blocks.values() {
            out = &out + b;
        }
        out
    }
}

fn offset(space: TruncatedSpace, i: usize, j: usize) -> Vec<isize> {
    let oi = space.occupations(i);
    let oj = space.occupations(j);
    oi.iter().zip(&oj).map(|(&a, &b)| b as isize - a as isize).collect()
}

pub fn diagonal_decomposition(x: &Operator) -> DiagonalDecomposition {
    let space = x.space();
    let d = space.dim();
    let mut blocks: BTreeMap<Vec<isize>, DMatrix<C64>> = BTreeMap::new();
    for j in 0..d {
        for i in 0..d {
            let v = x.matrix()[(i, j)];
            if v == C64::new(0.0, 0.0) {
                continue;
            }
            blocks
                .entry(offset(space, i, j))
                .or_insert_with(|| DMatrix::zeros(d, d))[(i, j)] = v;
        }
    }
    DiagonalDecomposition {
        space,
        blocks: blocks
            .into_iter()
            .map(|(k, m)| (k, Operator::from_matrix(space, m)))
            .collect(),
    }
}

/// ⟨X_ℓ, L*(X_ℓ)⟩_σ against sinh(β/2)|ℓ|·‖X_ℓ‖²_{2,σ}.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockCheck {
    pub offset: Vec<isize>,
    pub dirichlet: f64,
    pub bound: f64,
    pub margin: f64,
    pub tolerance: f64,
    pub pass: bool,
}

pub fn spectral_block_check(x_ell: &Operator, ou: &OUParams) -> Result<BlockCheck> {
    let decomp = diagonal_decomposition(x_ell);
    if decomp.len() > 1 {
        return Err(Error::Precondition(format!(
            "operator spans {} diagonal blocks",
            decomp.len()
        )));
    }
    let space = x_ell.space();
    let offset = decomp
        .blocks()
        .keys()
        .next()
        .cloned()
        .unwrap_or_else(|| vec![0; space.modes()]);
    let gamma = Gamma::new(&reference_state(ou, space)?)?;
    let norm2 = gamma.inner(x_ell, x_ell)?.re;
    let l1: isize = offset.iter().map(|l| l.abs()).sum();
    let bound = ou.gap() * l1 as f64 * norm2;
    let dirichlet = operator_dirichlet(x_ell, ou)?;
    let tolerance = 1e-8 * norm2.max(1.0);
    let margin = dirichlet - bound;
    Ok(BlockCheck {
        offset,
        dirichlet,
        bound,
        margin,
        tolerance,
        pass: margin >= -tolerance,
    })
}
