use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::{Operator, State};
use crate::tol::{EPS_CLIP, EPS_PSD, LOG_REGULARIZATION};
use crate::{Error, Result, C64};

/// Eigendecomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub values: DVector<f64>,
    pub vectors: DMatrix<C64>,
}

impl Spectrum {
    /// Decomposes the Hermitian part of `m`.
    pub fn of(m: &DMatrix<C64>) -> Self {
        let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(h);
        Self {
            values: eig.eigenvalues,
            vectors: eig.eigenvectors,
        }
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// V f(Λ) V†.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> DMatrix<C64> {
        let mut scaled = self.vectors.clone();
        for (j, &lam) in self.values.iter().enumerate() {
            let fj = f(lam);
            scaled.column_mut(j).scale_mut(fj);
        }
        scaled * self.vectors.adjoint()
    }

    /// V g(Λ) V† for complex-valued g.
    pub fn map_complex(&self, f: impl Fn(f64) -> C64) -> DMatrix<C64> {
        let mut scaled = self.vectors.clone();
        for (j, &lam) in self.values.iter().enumerate() {
            let fj = f(lam);
            for z in scaled.column_mut(j).iter_mut() {
                *z *= fj;
            }
        }
        scaled * self.vectors.adjoint()
    }

    /// Eigenvalues sorted in decreasing order.
    pub fn sorted_desc(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.values.iter().copied().collect();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    fn check_psd(&self) -> Result<()> {
        let min = self.min();
        if min < -EPS_PSD {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        Ok(())
    }

    /// Fractional power with eigenvalues below `EPS_CLIP` treated as zero.
    /// Non-positive exponents require full rank.
    pub fn power(&self, e: f64) -> Result<DMatrix<C64>> {
        self.check_psd()?;
        if e <= 0.0 {
            let min = self.min();
            if min <= EPS_CLIP {
                return Err(Error::RankDeficient { min_eigenvalue: min });
            }
        }
        Ok(self.map(|l| if l < EPS_CLIP { 0.0 } else { l.powf(e) }))
    }

    /// Natural logarithm; requires strictly positive eigenvalues (see
    /// [`regularize`] for rank-deficient states).
    pub fn log(&self) -> Result<DMatrix<C64>> {
        self.check_psd()?;
        let min = self.min();
        if min <= 0.0 {
            return Err(Error::RankDeficient { min_eigenvalue: min });
        }
        Ok(self.map(f64::ln))
    }

    /// −Σ λ ln λ over eigenvalues above the clip floor.
    pub fn entropy(&self) -> f64 {
        self.values
            .iter()
            .filter(|&&l| l > EPS_CLIP)
            .map(|&l| -l * l.ln())
            .sum()
    }
}

/// `(1−ε)ρ + ε·I/d` with ε = `LOG_REGULARIZATION` when ρ is not full rank
/// within `EPS_CLIP`; returns the state, its spectrum and ε (0 if untouched).
pub fn regularize(s: &State) -> (State, Spectrum, f64) {
    let spec = s.spectrum();
    if spec.min() > EPS_CLIP {
        return (s.clone(), spec, 0.0);
    }
    let eps = LOG_REGULARIZATION;
    let d = s.dim();
    let mixed = s.matrix() * C64::new(1.0 - eps, 0.0) + DMatrix::<C64>::identity(d, d) * C64::new(eps / d as f64, 0.0);
    let out = State::trusted(Operator::from_matrix(s.space(), mixed), s.tail_mass());
    let spec = out.spectrum();
    (out, spec, eps)
}

/// s^e for a state `s`.
pub fn matrix_power(s: &State, e: f64) -> Result<Operator> {
    hermitian_power(s.op(), e)
}

/// Power of a positive semidefinite operator.
pub fn hermitian_power(op: &Operator, e: f64) -> Result<Operator> {
    if e == 1.0 {
        return Ok(op.hermitian_part());
    }
    let spec = Spectrum::of(op.matrix());
    Ok(Operator::from_matrix(op.space(), spec.power(e)?))
}

/// S(ρ) = −tr ρ ln ρ.
pub fn von_neumann_entropy(s: &State) -> f64 {
    s.spectrum().entropy()
}

/// D(ρ‖σ) = tr ρ ln ρ − tr ρ ln σ. `σ` may be unnormalised (a truncated
/// thermal state), in which case this is the exact relative entropy against
/// the untruncated reference for ρ supported inside the cutoff.
pub fn relative_entropy(rho: &State, sigma: &State) -> Result<f64> {
    if rho.space() != sigma.space() {
        return Err(Error::DimensionMismatch {
            expected: sigma.dim(),
            found: rho.dim(),
        });
    }
    let neg_s = -von_neumann_entropy(rho);
    let (cross, leaked) = if is_diagonal(sigma.matrix()) {
        let mut cross = 0.0;
        let mut leaked = 0.0;
        for i in 0..rho.dim() {
            let s = sigma.matrix()[(i, i)].re;
            let r = rho.matrix()[(i, i)].re;
            if s > EPS_CLIP {
                cross += r * s.ln();
            } else {
                leaked += r.max(0.0);
            }
        }
        (cross, leaked)
    } else {
        let spec = sigma.spectrum();
        let rv = rho.matrix() * &spec.vectors;
        let mut cross = 0.0;
        let mut leaked = 0.0;
        for (k, &mu) in spec.values.iter().enumerate() {
            let w = spec.vectors.column(k).dotc(&rv.column(k)).re;
            if mu > EPS_CLIP {
                cross += w * mu.ln();
            } else {
                leaked += w.max(0.0);
            }
        }
        (cross, leaked)
    };
    if leaked > EPS_CLIP * rho.dim() as f64 {
        return Err(Error::SupportViolation { leaked });
    }
    Ok(neg_s - cross)
}

fn is_diagonal(m: &DMatrix<C64>) -> bool {
    let n = m.nrows();
    (0..n).all(|j| (0..n).all(|i| i == j || m[(i, j)] == C64::new(0.0, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{random_state, thermal_state, ThermalParam, TruncatedSpace};
    use approx::assert_relative_eq;

    #[test]
    fn thermal_entropy_half() {
        let sp = TruncatedSpace::new(80).unwrap();
        let t = thermal_state(ThermalParam::new(0.5).unwrap(), sp).unwrap();
        assert_relative_eq!(von_neumann_entropy(&t), 1.3862944, epsilon = 1e-7);
        assert_relative_eq!(
            ThermalParam::new(0.5).unwrap().entropy(),
            2.0 * 2f64.ln(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn pure_state_entropy_zero() {
        let sp = TruncatedSpace::new(10).unwrap();
        let r = random_state(sp, 1, 3).unwrap();
        assert!(von_neumann_entropy(&r).abs() < 1e-12);
        assert_eq!(von_neumann_entropy(&State::vacuum(sp)), 0.0);
    }

    #[test]
    fn power_pairs_multiply_back() {
        let sp = TruncatedSpace::new(12).unwrap();
        let r = random_state(sp, 12, 11).unwrap();
        for p in [1.1, 1.5, 2.0] {
            let ph = p / (p - 1.0);
            let a = matrix_power(&r, 1.0 / p).unwrap();
            let b = matrix_power(&r, 1.0 / ph).unwrap();
            let prod = &a * &b;
            assert!((prod.matrix() - r.matrix()).camax() < 1e-12);
        }
        let t = thermal_state(ThermalParam::new(0.3).unwrap(), sp).unwrap();
        let h = matrix_power(&t, 0.5).unwrap();
        for n in 0..12 {
            assert_relative_eq!(
                h.matrix()[(n, n)].re,
                (0.7 * 0.3f64.powi(n as i32)).sqrt(),
                max_relative = 1e-12
            );
        }
        let e1 = matrix_power(&r, 1.0).unwrap();
        assert_eq!(e1.matrix(), r.matrix());
    }

    #[test]
    fn relative_entropy_basics() {
        let sp = TruncatedSpace::new(10).unwrap();
        let t = thermal_state(ThermalParam::new(0.4).unwrap(), sp).unwrap();
        let r = random_state(sp, 4, 2).unwrap();
        assert!(relative_entropy(&r, &r).unwrap().abs() < 1e-10);
        let full = random_state(sp, 10, 2).unwrap();
        assert!(relative_entropy(&full, &full).unwrap().abs() < 1e-10);
        assert!(relative_entropy(&r, &t).unwrap() > 0.0);
        assert!(matches!(
            relative_entropy(&full, &State::vacuum(sp)),
            Err(Error::SupportViolation { .. })
        ));
    }

    #[test]
    fn relative_entropy_to_truncated_thermal_is_exact() {
        // D(ρ‖σ) = −S(ρ) + β tr(ρ n) − ln(1−e^{−β}) for the untruncated σ.
        let sp = TruncatedSpace::new(15).unwrap();
        let beta = 0.8;
        let t = thermal_state(ThermalParam::from_beta(beta).unwrap(), sp).unwrap();
        let r = random_state(sp, 3, 5).unwrap();
        let expect = -von_neumann_entropy(&r) + beta * r.mean_photon(0) - (-(-beta).exp()).ln_1p();
        assert_relative_eq!(relative_entropy(&r, &t).unwrap(), expect, epsilon = 1e-11);
    }

    #[test]
    fn negative_eigenvalue_fails_loudly() {
        let sp = TruncatedSpace::new(3).unwrap();
        let op = Operator::from_diagonal(sp, &[1.0, 0.5, -0.5]).unwrap();
        assert!(matches!(hermitian_power(&op, 0.5), Err(Error::NotPositive { .. })));
    }
}
