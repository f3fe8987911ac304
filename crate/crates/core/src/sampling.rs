//! Seeded sampling drivers shared by the acceptance suite, the CLI and the
//! benches. Sample `i` always draws from stream `i` of the run seed, so the
//! output is identical under [`Execution::Sequential`] and
//! [`Execution::Parallel`].

use rand::Rng;

use crate::channels::SemigroupParams;
use crate::cmoe::{cmoe_verify, Trajectory};
use crate::fock::{ginibre_state, random_hermitian, random_psd, support_below, Operator, State, TruncatedSpace};
use crate::lsi_ou::{lsi_ratio, LsiRatio, OUParams};
use crate::meta_lsi::{eta_th, verify_meta_lsi_against, MetaLsiReport, UpsilonParams};
use crate::par::Execution;
use crate::rng::{stream, SampleRng};
use crate::{Error, Result};

/// Ginibre sampler on a truncated space with ranks cycling through
/// `min_rank..=max_rank` and support restricted to occupations below
/// `support` in every mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sampler {
    pub space: TruncatedSpace,
    pub support: usize,
    pub min_rank: usize,
    pub max_rank: usize,
    pub seed: u64,
}

impl Sampler {
    /// Full support, ranks `min_rank..=max_rank`.
    pub fn new(space: TruncatedSpace, min_rank: usize, max_rank: usize, seed: u64) -> Result<Self> {
        Self::with_support(space, space.levels(), min_rank, max_rank, seed)
    }

    pub fn with_support(
        space: TruncatedSpace,
        support: usize,
        min_rank: usize,
        max_rank: usize,
        seed: u64,
    ) -> Result<Self> {
        if support == 0 || support > space.levels() {
            return Err(Error::InvalidParameter {
                name: "support",
                value: support as f64,
                reason: "support must lie between 1 and the number of levels",
            });
        }
        let dim = support.pow(space.modes() as u32);
        if min_rank == 0 || min_rank > max_rank || max_rank > dim {
            return Err(Error::InvalidParameter {
                name: "rank",
                value: max_rank as f64,
                reason: "need 1 ≤ min_rank ≤ max_rank ≤ support dimension",
            });
        }
        Ok(Self {
            space,
            support,
            min_rank,
            max_rank,
            seed,
        })
    }

    pub fn rng(&self, index: usize) -> SampleRng {
        stream(self.seed, index as u64)
    }

    pub fn rank(&self, index: usize) -> usize {
        self.min_rank + index % (self.max_rank - self.min_rank + 1)
    }

    pub fn state(&self, index: usize) -> Result<State> {
        let support = support_below(self.space, self.support);
        ginibre_state(self.space, &support, self.rank(index), &mut self.rng(index))
    }

    pub fn states(&self, count: usize, exec: Execution) -> Result<Vec<State>> {
        exec.map(count, |i| self.state(i)).into_iter().collect()
    }

    /// Unit-trace positive operator of the sample's rank on the full space.
    pub fn psd(&self, index: usize) -> Result<Operator> {
        random_psd(self.space, self.rank(index), &mut self.rng(index))
    }

    pub fn hermitian(&self, index: usize) -> Operator {
        random_hermitian(self.space, &mut self.rng(index))
    }

    /// Fock-diagonal state with uniform random weights on the support.
    pub fn diagonal_state(&self, index: usize) -> Result<State> {
        let mut rng = self.rng(index);
        let probs: Vec<f64> = (0..self.space.dim())
            .map(|i| {
                if self.space.occupations(i).iter().all(|&n| n < self.support) {
                    rng.random::<f64>()
                } else {
                    0.0
                }
            })
            .collect();
        let total: f64 = probs.iter().sum();
        let probs: Vec<f64> = probs.iter().map(|q| q / total).collect();
        State::diagonal(self.space, &probs, 0.0)
    }
}

/// Evaluate `f` on `0..count` and collect, stopping at the first error.
pub fn run<T, F>(count: usize, exec: Execution, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    exec.map(count, f).into_iter().collect()
}

/// Meta log-Sobolev checks on `count` samples against one η_th.
pub fn meta_lsi_sweep(
    sampler: &Sampler,
    params: &UpsilonParams,
    count: usize,
    exec: Execution,
) -> Result<Vec<MetaLsiReport>> {
    let eta = eta_th(params);
    run(count, exec, |i| {
        verify_meta_lsi_against(&sampler.state(i)?, params, &eta)
    })
}

/// E_p/D on `count` samples.
pub fn lsi_ratio_sweep(
    sampler: &Sampler,
    p: f64,
    ou: &OUParams,
    count: usize,
    exec: Execution,
) -> Result<Vec<LsiRatio>> {
    run(count, exec, |i| lsi_ratio(&sampler.state(i)?, p, ou))
}

/// Entropy trajectories of `count` samples.
pub fn cmoe_sweep(
    sampler: &Sampler,
    semigroup: &SemigroupParams,
    t_max: f64,
    steps: usize,
    count: usize,
    exec: Execution,
) -> Result<Vec<Trajectory>> {
    run(count, exec, |i| {
        cmoe_verify(&sampler.state(i)?, semigroup, t_max, steps)
    })
}
