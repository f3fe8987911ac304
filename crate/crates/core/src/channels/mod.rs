//! Phase-covariant Gaussian semigroups on the truncated space.
//!
//! The Lindbladian is
//! `L(ρ) = ν₀(½{aa†,ρ} − a†ρa) + ν₁(½{a†a,ρ} − aρa†)` and the semigroup is
//! `Φ_t = e^{−tL}`. Superoperators act on column-stacked operators:
//! `vec(ρ)[i + j·N] = ρ_{ij}`.
//!
//! `L` preserves every Fock diagonal `ρ_{k,k+ℓ}`, so the dense `N²×N²`
//! superoperator splits into `2N−1` real tridiagonal sector blocks. Time
//! evolution exponentiates those blocks instead of the full superoperator.

mod evolve;
mod lindblad;
mod oracle;
mod params;
mod sectors;

pub use evolve::{evolve, evolve_with, generator_fd_check, Evolution, EvolveMethod, Propagator};
pub use lindblad::{
    lindbladian_adjoint, lindbladian_adjoint_with, lindbladian_apply, lindbladian_apply_with, lindbladian_superop,
    mode_lindbladian_adjoint, mode_lindbladian_apply, Superoperator,
};
pub use oracle::{gaussian_channel_action, GaussianStateParams};
pub use params::{
    additive_params, additive_semigroup, amplifier_params, amplifier_semigroup, attenuator_params,
    attenuator_semigroup, ChannelClass, ChannelFamily, PhaseCovariantParams, SemigroupParams,
};
pub use sectors::{sector_generators, SectorGenerators};

/// How the product `a a†` is formed at the cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    /// Product of the truncated matrices; its top entry is 0. Generates a
    /// trace-preserving semigroup on the cutoff space.
    Closed,
    /// `a a† = a†a + 1` on every level: exact infinite-dimensional values
    /// for operators supported inside the cutoff.
    Embedded,
}

impl Boundary {
    /// Diagonal entry `⟨n|a a†|n⟩` of level `n` out of `levels`.
    pub(crate) fn aa_dag(self, n: usize, levels: usize) -> f64 {
        match self {
            Boundary::Closed if n + 1 == levels => 0.0,
            _ => (n + 1) as f64,
        }
    }
}
