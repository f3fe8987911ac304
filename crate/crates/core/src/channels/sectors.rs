use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::lindblad::diag_coeff;
use super::{Boundary, SemigroupParams};

/// Real tridiagonal blocks of the single-mode Lindbladian, one per Fock
/// diagonal offset ℓ = 0…N−1.
///
/// Block ℓ acts on `c_k = ρ_{k,k+ℓ}` (and identically on `ρ_{k+ℓ,k}`) as
/// `L(ρ)` restricted to that diagonal; its transpose is the restriction of
/// `L*`.
#[derive(Debug, Clone)]
pub struct SectorGenerators {
    params: SemigroupParams,
    levels: usize,
    boundary: Boundary,
    blocks: Vec<DMatrix<f64>>,
}

impl SectorGenerators {
    pub fn new(params: SemigroupParams, levels: usize, boundary: Boundary) -> Self {
        let blocks = (0..levels)
            .map(|ell| sector_matrix(&params, levels, ell, boundary))
            .collect();
        Self {
            params,
            levels,
            boundary,
            blocks,
        }
    }

    pub fn params(&self) -> SemigroupParams {
        self.params
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    /// Block of offset |ℓ|.
    pub fn block(&self, ell: isize) -> &DMatrix<f64> {
        &self.blocks[ell.unsigned_abs()]
    }

    pub fn blocks(&self) -> &[DMatrix<f64>] {
        &self.blocks
    }

    /// Eigenpairs of block ℓ through its symmetrisation.
    ///
    /// Returns eigenvalues and the eigenvectors of the symmetrised block
    /// (`u = D^{-1} v`, with `v` an eigenvector of the block and
    /// `D = diag((ν₀/ν₁)^{k/2})`). Requires ν₀, ν₁ > 0.
    pub fn symmetric_eigen(&self, ell: usize) -> (DVector<f64>, DMatrix<f64>) {
        let m = &self.blocks[ell];
        let n = m.nrows();
        let (nu0, nu1) = (self.params.nu0(), self.params.nu1());
        let mut s = DMatrix::<f64>::zeros(n, n);
        for k in 0..n {
            s[(k, k)] = m[(k, k)];
            if k > 0 {
                let off = -(nu0 * nu1 * (k * (k + ell)) as f64).sqrt();
                s[(k, k - 1)] = off;
                s[(k - 1, k)] = off;
            }
        }
        let eig = SymmetricEigen::new(s);
        (eig.eigenvalues, eig.eigenvectors)
    }
}

fn sector_matrix(p: &SemigroupParams, n: usize, ell: usize, b: Boundary) -> DMatrix<f64> {
    let m = n - ell;
    let mut out = DMatrix::<f64>::zeros(m, m);
    for k in 0..m {
        out[(k, k)] = diag_coeff(p, k, k + ell, n, b);
        if k > 0 {
            out[(k, k - 1)] = -p.nu0() * ((k * (k + ell)) as f64).sqrt();
        }
        if k + 1 < m {
            out[(k, k + 1)] = -p.nu1() * (((k + 1) * (k + 1 + ell)) as f64).sqrt();
        }
    }
    out
}

type Key = (u64, u64, usize, Boundary);

fn cache() -> &'static RwLock<HashMap<Key, Arc<SectorGenerators>>> {
    static CACHE: OnceLock<RwLock<HashMap<Key, Arc<SectorGenerators>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Shared sector blocks for (ν₀, ν₁, N, boundary), built once per key.
pub fn sector_generators(p: &SemigroupParams, levels: usize, boundary: Boundary) -> Arc<SectorGenerators> {
    let key = (p.nu0().to_bits(), p.nu1().to_bits(), levels, boundary);
    if let Some(hit) = cache().read().expect("sector cache poisoned").get(&key) {
        return Arc::clone(hit);
    }
    let built = Arc::new(SectorGenerators::new(*p, levels, boundary));
    let mut w = cache().write().expect("sector cache poisoned");
    Arc::clone(w.entry(key).or_insert(built))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::lindbladian_superop;
    use crate::fock::TruncatedSpace;

    #[test]
    fn blocks_match_dense_superoperator() {
        let p = SemigroupParams::new(0.4, 1.3).unwrap();
        let n = 7;
        let sup = lindbladian_superop(&p, TruncatedSpace::new(n).unwrap()).unwrap();
        let sec = SectorGenerators::new(p, n, Boundary::Closed);
        for ell in -(n as isize - 1)..(n as isize) {
            let dense = sup.sector_block(ell);
            let block = sec.block(ell);
            for i in 0..block.nrows() {
                for j in 0..block.ncols() {
                    assert!((dense[(i, j)].re - block[(i, j)]).abs() < 1e-14);
                    assert_eq!(dense[(i, j)].im, 0.0);
                }
            }
        }
    }

    #[test]
    fn cache_returns_shared_blocks() {
        let p = SemigroupParams::new(0.25, 0.75).unwrap();
        let a = sector_generators(&p, 9, Boundary::Closed);
        let b = sector_generators(&p, 9, Boundary::Closed);
        assert!(Arc::ptr_eq(&a, &b));
        let c = sector_generators(&p, 10, Boundary::Closed);
        assert!(!Arc::ptr_eq(&a, &c));
    }

    #[test]
    fn cache_is_safe_under_concurrent_readers() {
        let p = SemigroupParams::new(0.5, 0.9).unwrap();
        let handles: Vec<_> = (0..8)
            .map(|_| std::thread::spawn(move || sector_generators(&p, 12, Boundary::Closed)))
            .collect();
        let got: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        for g in &got {
            assert_eq!(g.blocks().len(), 12);
            assert_eq!(g.block(3), got[0].block(3));
        }
    }
}
