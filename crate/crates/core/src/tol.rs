//! Numerical floors and tolerances shared by every module.

/// Eigenvalues below this are treated as exact zeros in logarithms and
/// fractional powers.
pub const EPS_CLIP: f64 = 1e-13;

/// Most negative eigenvalue accepted for a positive semidefinite operator.
pub const EPS_PSD: f64 = 1e-10;

/// Allowed deviation of a state's trace from one (before tail mass).
pub const EPS_TR: f64 = 1e-10;

/// Allowed anti-Hermitian part of a state, relative to its norm.
pub const EPS_HERM: f64 = 1e-10;

/// Eigenvalue mass that PSD re-projection may clip before flagging.
pub const CLIP_RENORMALIZE: f64 = 1e-8;

/// Leaked probability above which a truncated flow is declared inconclusive.
pub const TAIL_GUARD: f64 = 1e-6;

/// Mixing weight used to regularise rank-deficient states before taking logs.
pub const LOG_REGULARIZATION: f64 = 1e-12;

/// Denominator floor for log-Sobolev ratios.
pub const RATIO_FLOOR: f64 = 1e-14;
