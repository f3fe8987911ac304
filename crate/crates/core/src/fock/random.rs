use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{Operator, State, TruncatedSpace};
use crate::{Error, Result, C64};

/// Ginibre state of the given rank on the full truncated space, drawn from
/// stream 0 of `seed`.
pub fn random_state(space: TruncatedSpace, rank: usize, seed: u64) -> Result<State> {
    let support: Vec<usize> = (0..space.dim()).collect();
    let mut rng = crate::rng::stream(seed, 0);
    ginibre_state(space, &support, rank, &mut rng)
}

/// Basis indices whose every mode occupation is below `levels`.
pub fn support_below(space: TruncatedSpace, levels: usize) -> Vec<usize> {
    (0..space.dim())
        .filter(|&i| space.occupations(i).iter().all(|&n| n < levels))
        .collect()
}

/// G G†/tr(G G†) with G a |support|×rank complex Gaussian matrix embedded on
/// the basis vectors listed in `support`.
pub fn ginibre_state<R: Rng + ?Sized>(
    space: TruncatedSpace,
    support: &[usize],
    rank: usize,
    rng: &mut R,
) -> Result<State> {
    if rank == 0 || rank > support.len() {
        return Err(Error::InvalidParameter {
            name: "rank",
            value: rank as f64,
            reason: "rank must lie between 1 and the support dimension",
        });
    }
    if support.iter().any(|&i| i >= space.dim()) {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            found: support.iter().copied().max().unwrap_or(0) + 1,
        });
    }
    let d = space.dim();
    let mut g = DMatrix::<C64>::zeros(d, rank);
    for &row in support {
        for col in 0..rank {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            g[(row, col)] = C64::new(re, im);
        }
    }
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    Ok(State::trusted(Operator::from_matrix(space, m / C64::new(tr, 0.0)), 0.0))
}

fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im)
    })
}

/// G G† for a d×rank complex Gaussian G, scaled to unit trace.
pub fn random_psd<R: Rng + ?Sized>(space: TruncatedSpace, rank: usize, rng: &mut R) -> Result<Operator> {
    if rank == 0 || rank > space.dim() {
        return Err(Error::InvalidParameter {
            name: "rank",
            value: rank as f64,
            reason: "rank must lie between 1 and the space dimension",
        });
    }
    let g = gaussian_matrix(space.dim(), rank, rng);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    Ok(Operator::from_matrix(space, m / C64::new(tr, 0.0)))
}

/// (G + G†)/2 for a square complex Gaussian G.
pub fn random_hermitian<R: Rng + ?Sized>(space: TruncatedSpace, rng: &mut R) -> Operator {
    let g = gaussian_matrix(space.dim(), space.dim(), rng);
    let h = (&g + g.adjoint()) * C64::new(0.5, 0.0);
    Operator::from_matrix(space, h)
}
