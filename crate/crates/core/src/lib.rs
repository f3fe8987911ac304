//! Truncated Fock-space numerics for single-mode (and two-mode) phase-covariant
//! bosonic Gaussian semigroups.
//!
//! The crate is organised around five layers:
//!
//! * [`fock`]: truncated ladder operators, states, entropies, matrix functions
//!   and explicit Gaussian unitaries.
//! * [`channels`]: Lindbladians of the attenuator / additive-noise / amplifier
//!   semigroups, their superoperators, time evolution and the analytic
//!   characteristic-function oracle.
//! * [`meta_lsi`]: the Υ functional, its thermal infimum η_th, the diagonal
//!   rearrangement and the two-mode Υ_m checks.
//! * [`lsi_ou`]: log-Sobolev machinery of the quantum Ornstein-Uhlenbeck
//!   semigroup (weighted norms, Dirichlet forms, optimal constants, spectrum,
//!   diagonal decomposition, entropic inequality, multimode bound).
//! * [`cmoe`]: entropy flow along semigroups and constrained minimum output
//!   entropy verification.
//!
//! # Truncation conventions
//!
//! A state on `N` retained levels is treated as an infinite-dimensional state
//! supported on `|0⟩…|N−1⟩`. Functionals evaluated with
//! [`Boundary::Embedded`](channels::Boundary::Embedded) use `a a† = a†a + 1`
//! on every retained level and are then *exact* for such states. Dynamics use
//! [`Boundary::Closed`](channels::Boundary::Closed), the truncated Lindbladian
//! built from truncated matrix products, which generates a genuine
//! trace-preserving semigroup on the cutoff space. Probability that the
//! infinite-dimensional flow would push past the cutoff is tracked as leaked
//! mass.
//!
//! Multimode operators use the mode-1-major (Kronecker) index convention:
//! `|n₁, n₂⟩ ↦ n₁·N + n₂`.

pub mod channels;
pub mod cmoe;
mod error;
pub mod fock;
pub mod lsi_ou;
pub mod meta_lsi;
pub mod par;
pub mod rng;
pub mod sampling;
pub mod tol;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// A logarithmic functional together with the weight `ε` of the maximally
/// mixed state mixed into a rank-deficient input before taking logarithms
/// (zero when the input was already full rank).
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Regularized {
    pub value: f64,
    pub mixing: f64,
}

impl Regularized {
    /// Extra tolerance a check must allow for the mixing, |ε ln ε|·dim.
    pub fn slack(&self, dim: usize) -> f64 {
        if self.mixing == 0.0 {
            0.0
        } else {
            (self.mixing * self.mixing.ln()).abs() * dim as f64
        }
    }
}
