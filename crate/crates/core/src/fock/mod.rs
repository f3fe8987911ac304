//! Truncated Fock-space primitives.
//!
//! A [`TruncatedSpace`] keeps the levels `|0⟩…|N−1⟩` of each of `m` modes.
//! Multimode operators are indexed mode-1-major: `|n₁,…,n_m⟩` sits at
//! `((n₁·N + n₂)·N + …)·N + n_m`, which is exactly the layout produced by
//! [`tensor`] (Kronecker product with the first factor outermost).

mod gaussian;
mod linalg;
mod random;

pub use gaussian::{
    beam_splitter, characteristic_function, displacement, mode_displacement, mode_phase_rotation, phase_rotation,
    squeezer, unitarity_defect,
};
pub use linalg::{hermitian_power, matrix_power, regularize, relative_entropy, von_neumann_entropy, Spectrum};
pub use random::{ginibre_state, random_hermitian, random_psd, random_state, support_below};

use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;

use crate::tol::{EPS_HERM, EPS_PSD, EPS_TR};
use crate::{Error, Result, C64};

/// Retained levels per mode and number of modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TruncatedSpace {
    levels: usize,
    modes: usize,
}

impl TruncatedSpace {
    /// Single-mode space with `levels` retained Fock levels.
    pub fn new(levels: usize) -> Result<Self> {
        Self::multimode(levels, 1)
    }

    pub fn multimode(levels: usize, modes: usize) -> Result<Self> {
        if levels < 2 {
            return Err(Error::InvalidParameter {
                name: "levels",
                value: levels as f64,
                reason: "need at least two retained levels",
            });
        }
        if modes == 0 {
            return Err(Error::InvalidParameter {
                name: "modes",
                value: 0.0,
                reason: "need at least one mode",
            });
        }
        Ok(Self { levels, modes })
    }

    /// Levels per mode (`N`).
    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    /// Hilbert-space dimension `N^m`.
    pub fn dim(&self) -> usize {
        self.levels.pow(self.modes as u32)
    }

    /// Occupation numbers of basis index `idx`, mode 1 first.
    pub fn occupations(&self, mut idx: usize) -> Vec<usize> {
        let mut occ = vec![0; self.modes];
        for slot in occ.iter_mut().rev() {
            *slot = idx % self.levels;
            idx /= self.levels;
        }
        occ
    }

    /// Basis index of the given occupation numbers.
    pub fn index(&self, occ: &[usize]) -> usize {
        debug_assert_eq!(occ.len(), self.modes);
        occ.iter().fold(0, |acc, &n| acc * self.levels + n)
    }
}

/// Dense operator on a truncated space.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    space: TruncatedSpace,
    mat: DMatrix<C64>,
}

impl Operator {
    pub fn new(space: TruncatedSpace, mat: DMatrix<C64>) -> Result<Self> {
        let d = space.dim();
        if mat.nrows() != d || mat.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: mat.nrows().max(mat.ncols()),
            });
        }
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { space, mat })
    }

    pub(crate) fn from_matrix(space: TruncatedSpace, mat: DMatrix<C64>) -> Self {
        debug_assert_eq!(mat.nrows(), space.dim());
        Self { space, mat }
    }

    pub fn zeros(space: TruncatedSpace) -> Self {
        let d = space.dim();
        Self::from_matrix(space, DMatrix::zeros(d, d))
    }

    pub fn identity(space: TruncatedSpace) -> Self {
        let d = space.dim();
        Self::from_matrix(space, DMatrix::identity(d, d))
    }

    pub fn from_diagonal(space: TruncatedSpace, diag: &[f64]) -> Result<Self> {
        if diag.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: diag.len(),
            });
        }
        let v = nalgebra::DVector::from_iterator(diag.len(), diag.iter().map(|&d| C64::new(d, 0.0)));
        Ok(Self::from_matrix(space, DMatrix::from_diagonal(&v)))
    }

    pub fn space(&self) -> TruncatedSpace {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.mat
    }

    pub fn adjoint(&self) -> Self {
        Self::from_matrix(self.space, self.mat.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.mat.trace()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::from_matrix(self.space, &self.mat * s)
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.norm()
    }

    /// Hilbert-Schmidt inner product tr(A†B).
    pub fn hs_inner(&self, other: &Operator) -> C64 {
        self.mat.dotc(&other.mat)
    }

    /// tr(A B) without forming the product.
    pub fn trace_product(&self, other: &Operator) -> C64 {
        self.mat.transpose().dot(&other.mat)
    }

    /// (A + A†)/2.
    pub fn hermitian_part(&self) -> Self {
        Self::from_matrix(self.space, (&self.mat + self.mat.adjoint()) * C64::new(0.5, 0.0))
    }

    /// Largest entry of A − A†.
    pub fn hermiticity_defect(&self) -> f64 {
        (&self.mat - self.mat.adjoint()).camax()
    }

    pub fn commutator(&self, other: &Operator) -> Self {
        self * other - other * self
    }

    pub fn diagonal_real(&self) -> Vec<f64> {
        self.mat.diagonal().iter().map(|z| z.re).collect()
    }

    /// Top-left `k×k` block, i.e. levels `0…k−1` of a single-mode operator.
    pub fn leading_block(&self, k: usize) -> DMatrix<C64> {
        let k = k.min(self.dim());
        self.mat.view((0, 0), (k, k)).into_owned()
    }

    /// U X U†.
    pub fn conjugate_by(&self, u: &Operator) -> Self {
        Self::from_matrix(self.space, &u.mat * &self.mat * u.mat.adjoint())
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        assert_eq!(self.space, rhs.space, "operator spaces differ");
        Operator::from_matrix(self.space, &self.mat + &rhs.mat)
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        assert_eq!(self.space, rhs.space, "operator spaces differ");
        Operator::from_matrix(self.space, &self.mat - &rhs.mat)
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        assert_eq!(self.space, rhs.space, "operator spaces differ");
        Operator::from_matrix(self.space, &self.mat * &rhs.mat)
    }
}

impl Add for Operator {
    type Output = Operator;
    fn add(self, rhs: Operator) -> Operator {
        &self + &rhs
    }
}

impl Sub for Operator {
    type Output = Operator;
    fn sub(self, rhs: Operator) -> Operator {
        &self - &rhs
    }
}

impl Mul for Operator {
    type Output = Operator;
    fn mul(self, rhs: Operator) -> Operator {
        &self * &rhs
    }
}

/// Kronecker product, first factor outermost (mode-1-major).
pub fn tensor(a: &Operator, b: &Operator) -> Result<Operator> {
    if a.space.levels != b.space.levels {
        return Err(Error::DimensionMismatch {
            expected: a.space.levels,
            found: b.space.levels,
        });
    }
    let space = TruncatedSpace::multimode(a.space.levels, a.space.modes + b.space.modes)?;
    Ok(Operator::from_matrix(space, a.mat.kronecker(&b.mat)))
}

/// Density operator with its recorded truncation tail mass.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    op: Operator,
    tail_mass: f64,
}

impl State {
    /// Validates Hermiticity, positivity and trace, then stores the
    /// Hermitian part of `op`.
    pub fn new(op: Operator, tail_mass: f64) -> Result<Self> {
        if !(tail_mass >= 0.0 && tail_mass.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "tail_mass",
                value: tail_mass,
                reason: "must be finite and non-negative",
            });
        }
        let scale = op.frobenius_norm().max(1.0);
        let defect = op.hermiticity_defect();
        if defect > EPS_HERM * scale {
            return Err(Error::NotHermitian { deviation: defect });
        }
        let op = op.hermitian_part();
        let tr = op.trace().re;
        let tol = EPS_TR + tail_mass;
        if (tr - 1.0).abs() > tol {
            return Err(Error::TraceMismatch {
                trace: tr,
                tolerance: tol,
            });
        }
        let spec = Spectrum::of(op.matrix());
        let min = spec.min();
        if min < -EPS_PSD {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        Ok(Self { op, tail_mass })
    }

    /// Builds a state known to be valid up to roundoff; only the Hermitian
    /// part is kept.
    pub(crate) fn trusted(op: Operator, tail_mass: f64) -> Self {
        Self {
            op: op.hermitian_part(),
            tail_mass,
        }
    }

    /// Pure state |ψ⟩⟨ψ| from (unnormalised) amplitudes.
    pub fn pure(space: TruncatedSpace, amplitudes: &[C64]) -> Result<Self> {
        if amplitudes.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: amplitudes.len(),
            });
        }
        let v = nalgebra::DVector::from_column_slice(amplitudes);
        let n = v.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidParameter {
                name: "amplitudes",
                value: n,
                reason: "state vector must have finite non-zero norm",
            });
        }
        let v = v / C64::new(n, 0.0);
        Ok(Self::trusted(Operator::from_matrix(space, &v * v.adjoint()), 0.0))
    }

    /// Fock state |n⟩⟨n| (basis index `n` for multimode spaces).
    pub fn fock(space: TruncatedSpace, n: usize) -> Result<Self> {
        if n >= space.dim() {
            return Err(Error::InvalidParameter {
                name: "n",
                value: n as f64,
                reason: "Fock level outside the truncated space",
            });
        }
        let mut diag = vec![0.0; space.dim()];
        diag[n] = 1.0;
        Ok(Self::trusted(Operator::from_diagonal(space, &diag)?, 0.0))
    }

    pub fn vacuum(space: TruncatedSpace) -> Self {
        Self::fock(space, 0).expect("vacuum always fits")
    }

    /// Diagonal state with the given populations.
    pub fn diagonal(space: TruncatedSpace, probs: &[f64], tail_mass: f64) -> Result<Self> {
        Self::new(Operator::from_diagonal(space, probs)?, tail_mass)
    }

    pub fn op(&self) -> &Operator {
        &self.op
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        self.op.matrix()
    }

    pub fn space(&self) -> TruncatedSpace {
        self.op.space
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn trace(&self) -> f64 {
        self.op.trace().re
    }

    pub fn spectrum(&self) -> Spectrum {
        Spectrum::of(self.op.matrix())
    }

    /// tr(ρ n_j) for mode `j`.
    pub fn mean_photon(&self, mode: usize) -> f64 {
        let space = self.space();
        self.op
            .matrix()
            .diagonal()
            .iter()
            .enumerate()
            .map(|(i, z)| z.re * space.occupations(i)[mode] as f64)
            .sum()
    }

    /// U ρ U† (tail mass carried over unchanged).
    pub fn conjugate_by(&self, u: &Operator) -> Self {
        Self::trusted(self.op.conjugate_by(u), self.tail_mass)
    }

    /// Product state; the tail is everything outside the product block.
    pub fn tensor(&self, other: &State) -> Result<Self> {
        let op = tensor(&self.op, &other.op)?;
        let tail = self.tail_mass + other.tail_mass - self.tail_mass * other.tail_mass;
        Ok(Self::trusted(op, tail))
    }
}

/// Thermal parameter `x = e^{−β}` in (0,1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalParam {
    x: f64,
}

impl ThermalParam {
    pub fn new(x: f64) -> Result<Self> {
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::InvalidParameter {
                name: "x",
                value: x,
                reason: "thermal parameter must lie in (0,1)",
            });
        }
        Ok(Self { x })
    }

    pub fn from_beta(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "beta",
                value: beta,
                reason: "inverse temperature must be positive and finite",
            });
        }
        Self::new((-beta).exp())
    }

    /// From the `y` parametrisation τ = (1−y²)Σ y^{2n}|n⟩⟨n|.
    pub fn from_y(y: f64) -> Result<Self> {
        Self::new(y * y)
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn beta(&self) -> f64 {
        -self.x.ln()
    }

    pub fn y(&self) -> f64 {
        self.x.sqrt()
    }

    /// Untruncated mean photon number x/(1−x).
    pub fn mean_photon(&self) -> f64 {
        self.x / (1.0 - self.x)
    }

    /// Untruncated entropy −x ln x/(1−x) − ln(1−x).
    pub fn entropy(&self) -> f64 {
        -self.x * self.x.ln() / (1.0 - self.x) - (-self.x).ln_1p()
    }
}

/// Thermal state (1−x)Σ xⁿ|n⟩⟨n| restricted to the cutoff, not renormalised;
/// tail mass x^N.
pub fn thermal_state(x: ThermalParam, space: TruncatedSpace) -> Result<State> {
    if space.modes() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: space.modes(),
        });
    }
    let n = space.levels();
    let diag: Vec<f64> = (0..n).map(|k| (1.0 - x.x) * x.x.powi(k as i32)).collect();
    Ok(State::trusted(
        Operator::from_diagonal(space, &diag)?,
        x.x.powi(n as i32),
    ))
}

/// Annihilation operator of mode `mode` (0-based).
pub fn mode_annihilation(space: TruncatedSpace, mode: usize) -> Operator {
    assert!(mode < space.modes(), "mode index out of range");
    let d = space.dim();
    let mut m = DMatrix::zeros(d, d);
    for col in 0..d {
        let mut occ = space.occupations(col);
        let n = occ[mode];
        if n > 0 {
            occ[mode] = n - 1;
            m[(space.index(&occ), col)] = C64::new((n as f64).sqrt(), 0.0);
        }
    }
    Operator::from_matrix(space, m)
}

/// Annihilation operator `a` (first mode of multimode spaces).
pub fn annihilation(space: TruncatedSpace) -> Operator {
    mode_annihilation(space, 0)
}

/// Truncated creation operator `a†`.
pub fn creation(space: TruncatedSpace) -> Operator {
    annihilation(space).adjoint()
}

pub fn mode_creation(space: TruncatedSpace, mode: usize) -> Operator {
    mode_annihilation(space, mode).adjoint()
}

/// Number operator `a†a` (exactly diagonal).
pub fn number_op(space: TruncatedSpace) -> Operator {
    mode_number(space, 0)
}

pub fn mode_number(space: TruncatedSpace, mode: usize) -> Operator {
    let diag: Vec<f64> = (0..space.dim()).map(|i| space.occupations(i)[mode] as f64).collect();
    Operator::from_diagonal(space, &diag).expect("diagonal has space dimension")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sp(n: usize) -> TruncatedSpace {
        TruncatedSpace::new(n).unwrap()
    }

    #[test]
    fn ladder_small_cases() {
        let a = annihilation(sp(2));
        assert_eq!(a.matrix()[(0, 1)], C64::new(1.0, 0.0));
        assert_eq!(a.matrix()[(1, 0)], C64::new(0.0, 0.0));
        let a3 = annihilation(sp(3));
        assert_relative_eq!(a3.matrix()[(1, 2)].re, 2f64.sqrt());
        let c = creation(sp(2));
        assert_eq!(c.matrix()[(1, 0)], C64::new(1.0, 0.0));
    }

    #[test]
    fn commutator_identity_on_interior() {
        let n = 9;
        let a = annihilation(sp(n));
        let comm = a.commutator(&a.adjoint());
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j && i < n - 1 { 1.0 } else { 0.0 };
                if i == n - 1 && j == n - 1 {
                    assert_relative_eq!(comm.matrix()[(i, j)].re, -((n - 1) as f64), epsilon = 1e-12);
                } else {
                    assert_relative_eq!(comm.matrix()[(i, j)].re, expect, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn number_operator_matches_product() {
        let s = sp(7);
        let a = annihilation(s);
        let n = &a.adjoint() * &a;
        assert!((n.matrix() - number_op(s).matrix()).camax() < 1e-14);
    }

    #[test]
    fn thermal_geometric_and_tail() {
        let st = thermal_state(ThermalParam::new(0.5).unwrap(), sp(20)).unwrap();
        assert_relative_eq!(st.matrix()[(0, 0)].re, 0.5);
        assert_relative_eq!(st.matrix()[(1, 1)].re, 0.25);
        assert_relative_eq!(st.tail_mass(), 2f64.powi(-20));
        assert_relative_eq!(ThermalParam::new(0.5).unwrap().mean_photon(), 1.0);
        assert!(ThermalParam::new(1.0).is_err());
        assert!(ThermalParam::new(0.0).is_err());
    }

    #[test]
    fn state_validation() {
        let s = sp(3);
        let bad = Operator::from_diagonal(s, &[0.5, 0.6, -0.1]).unwrap();
        assert!(matches!(State::new(bad, 0.0), Err(Error::NotPositive { .. })));
        let bad = Operator::from_diagonal(s, &[0.5, 0.6, 0.1]).unwrap();
        assert!(matches!(State::new(bad, 0.0), Err(Error::TraceMismatch { .. })));
        let mut m = DMatrix::from_diagonal_element(3, 3, C64::new(1.0 / 3.0, 0.0));
        m[(0, 1)] = C64::new(0.1, 0.0);
        assert!(matches!(
            State::new(Operator::new(s, m).unwrap(), 0.0),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn tensor_identity_and_index_convention() {
        let s = sp(4);
        let id = tensor(&Operator::identity(s), &Operator::identity(s)).unwrap();
        assert_eq!(id.matrix(), &DMatrix::<C64>::identity(16, 16));
        let two = TruncatedSpace::multimode(4, 2).unwrap();
        assert_eq!(two.index(&[1, 2]), 6);
        assert_eq!(two.occupations(6), vec![1, 2]);
        let a1 = mode_annihilation(two, 0);
        let kron = tensor(&annihilation(s), &Operator::identity(s)).unwrap();
        assert_eq!(a1.matrix(), kron.matrix());
        let a2 = mode_annihilation(two, 1);
        let kron = tensor(&Operator::identity(s), &annihilation(s)).unwrap();
        assert_eq!(a2.matrix(), kron.matrix());
    }
}
