use nalgebra::DMatrix;

use super::{Boundary, SemigroupParams};
use crate::fock::{mode_annihilation, mode_number, Operator, TruncatedSpace};
use crate::{Error, Result, C64};

fn aa_dag(space: TruncatedSpace, mode: usize, boundary: Boundary) -> DMatrix<C64> {
    match boundary {
        Boundary::Closed => {
            let a = mode_annihilation(space, mode);
            a.matrix() * a.matrix().adjoint()
        }
        Boundary::Embedded => {
            let d = space.dim();
            mode_number(space, mode).into_matrix() + DMatrix::<C64>::identity(d, d)
        }
    }
}

fn anticomm(a: &DMatrix<C64>, x: &DMatrix<C64>) -> DMatrix<C64> {
    a * x + x * a
}

/// L_j(ρ) for mode `mode`, built from matrix products of the ladder operators.
pub fn mode_lindbladian_apply(p: &SemigroupParams, rho: &Operator, mode: usize, boundary: Boundary) -> Operator {
    let space = rho.space();
    let a = mode_annihilation(space, mode);
    let a = a.matrix();
    let ad = a.adjoint();
    let n = mode_number(space, mode).into_matrix();
    let big = aa_dag(space, mode, boundary);
    let r = rho.matrix();
    let half = C64::new(0.5, 0.0);
    let birth = anticomm(&big, r) * half - &ad * r * a;
    let death = anticomm(&n, r) * half - a * r * &ad;
    Operator::from_matrix(space, birth * C64::new(p.nu0(), 0.0) + death * C64::new(p.nu1(), 0.0))
}

/// L_j*(X): ν₀(½{aa†,X} − aXa†) + ν₁(½{a†a,X} − a†Xa).
pub fn mode_lindbladian_adjoint(p: &SemigroupParams, x: &Operator, mode: usize, boundary: Boundary) -> Operator {
    let space = x.space();
    let a = mode_annihilation(space, mode);
    let a = a.matrix();
    let ad = a.adjoint();
    let n = mode_number(space, mode).into_matrix();
    let big = aa_dag(space, mode, boundary);
    let m = x.matrix();
    let half = C64::new(0.5, 0.0);
    let birth = anticomm(&big, m) * half - a * m * &ad;
    let death = anticomm(&n, m) * half - &ad * m * a;
    Operator::from_matrix(space, birth * C64::new(p.nu0(), 0.0) + death * C64::new(p.nu1(), 0.0))
}

/// Σ_j L_j(ρ) with the chosen boundary convention.
pub fn lindbladian_apply_with(p: &SemigroupParams, rho: &Operator, boundary: Boundary) -> Operator {
    let mut out = Operator::zeros(rho.space());
    for j in 0..rho.space().modes() {
        out = &out + &mode_lindbladian_apply(p, rho, j, boundary);
    }
    out
}

pub fn lindbladian_adjoint_with(p: &SemigroupParams, x: &Operator, boundary: Boundary) -> Operator {
    let mut out = Operator::zeros(x.space());
    for j in 0..x.space().modes() {
        out = &out + &mode_lindbladian_adjoint(p, x, j, boundary);
    }
    out
}

/// L(ρ) with the closed (trace-preserving) truncation.
pub fn lindbladian_apply(p: &SemigroupParams, rho: &Operator) -> Operator {
    lindbladian_apply_with(p, rho, Boundary::Closed)
}

/// Heisenberg adjoint L*(X) with the closed truncation.
pub fn lindbladian_adjoint(p: &SemigroupParams, x: &Operator) -> Operator {
    lindbladian_adjoint_with(p, x, Boundary::Closed)
}

/// Diagonal coefficient of entry (i, j): ½ν₀(A_i + A_j) + ½ν₁(i + j).
pub(crate) fn diag_coeff(p: &SemigroupParams, i: usize, j: usize, n: usize, b: Boundary) -> f64 {
    0.5 * p.nu0() * (b.aa_dag(i, n) + b.aa_dag(j, n)) + 0.5 * p.nu1() * (i + j) as f64
}

/// Single-mode L(ρ) entry by entry, O(N²).
pub(crate) fn apply_entrywise(p: &SemigroupParams, r: &DMatrix<C64>, b: Boundary) -> DMatrix<C64> {
    let n = r.nrows();
    DMatrix::from_fn(n, n, |i, j| {
        let mut v = r[(i, j)] * diag_coeff(p, i, j, n, b);
        if i > 0 && j > 0 {
            v -= r[(i - 1, j - 1)] * (p.nu0() * ((i * j) as f64).sqrt());
        }
        if i + 1 < n && j + 1 < n {
            v -= r[(i + 1, j + 1)] * (p.nu1() * (((i + 1) * (j + 1)) as f64).sqrt());
        }
        v
    })
}

/// Single-mode L*(X) entry by entry, O(N²).
#[cfg(test)]
pub(crate) fn adjoint_entrywise(p: &SemigroupParams, x: &DMatrix<C64>, b: Boundary) -> DMatrix<C64> {
    let n = x.nrows();
    DMatrix::from_fn(n, n, |i, j| {
        let mut v = x[(i, j)] * diag_coeff(p, i, j, n, b);
        if i + 1 < n && j + 1 < n {
            v -= x[(i + 1, j + 1)] * (p.nu0() * (((i + 1) * (j + 1)) as f64).sqrt());
        }
        if i > 0 && j > 0 {
            v -= x[(i - 1, j - 1)] * (p.nu1() * ((i * j) as f64).sqrt());
        }
        v
    })
}

/// Matrix of ρ ↦ L(ρ) on column-stacked operators.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    space: TruncatedSpace,
    entries: DMatrix<C64>,
}

impl Superoperator {
    pub fn space(&self) -> TruncatedSpace {
        self.space
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn vectorize(op: &Operator) -> nalgebra::DVector<C64> {
        let m = op.matrix();
        nalgebra::DVector::from_column_slice(m.as_slice())
    }

    pub fn unvectorize(space: TruncatedSpace, v: &nalgebra::DVector<C64>) -> Operator {
        let d = space.dim();
        Operator::from_matrix(space, DMatrix::from_column_slice(d, d, v.as_slice()))
    }

    pub fn apply(&self, op: &Operator) -> Operator {
        let v = &self.entries * Self::vectorize(op);
        Self::unvectorize(self.space, &v)
    }

    /// Restriction to the ℓ-th diagonal, indexed by the row of its first
    /// entry: basis element k is E_{k,k+ℓ} (ℓ ≥ 0) or E_{k+|ℓ|,k} (ℓ < 0).
    pub fn sector_block(&self, ell: isize) -> DMatrix<C64> {
        let n = self.space.levels();
        let s = ell.unsigned_abs();
        let m = n - s;
        let idx = |k: usize| if ell >= 0 { k + (k + s) * n } else { (k + s) + k * n };
        DMatrix::from_fn(m, m, |r, c| self.entries[(idx(r), idx(c))])
    }
}

/// Dense N²×N² superoperator of the closed single-mode Lindbladian.
/// Memory is 16·N⁴ bytes (≈ 0.65 GB at N = 80).
pub fn lindbladian_superop(p: &SemigroupParams, space: TruncatedSpace) -> Result<Superoperator> {
    if space.modes() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: space.modes(),
        });
    }
    let n = space.levels();
    let b = Boundary::Closed;
    let mut s = DMatrix::<C64>::zeros(n * n, n * n);
    let at = |i: usize, j: usize| i + j * n;
    for j in 0..n {
        for i in 0..n {
            let row = at(i, j);
            s[(row, row)] = C64::new(diag_coeff(p, i, j, n, b), 0.0);
            if i > 0 && j > 0 {
                s[(row, at(i - 1, j - 1))] = C64::new(-p.nu0() * ((i * j) as f64).sqrt(), 0.0);
            }
            if i + 1 < n && j + 1 < n {
                s[(row, at(i + 1, j + 1))] = C64::new(-p.nu1() * (((i + 1) * (j + 1)) as f64).sqrt(), 0.0);
            }
        }
    }
    Ok(Superoperator { space, entries: s })
}
