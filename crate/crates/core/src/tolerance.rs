//! Shared numeric tolerances.
//!
//! Identities that hold term-for-term in the log domain are checked at
//! [`LOG_IDENTITY`]; ratios and differences of exponentiated quantities at
//! [`RATIO`].

/// Identities evaluated in the log domain (normalization, reductions).
pub const LOG_IDENTITY: f64 = 1e-12;

/// Ratios of exponentiated quantities (moments, CPR, factorization).
pub const RATIO: f64 = 1e-10;

/// Relative agreement between exact tau values and their closed-form limits
/// at omega = 1e-6 or 1e6.
pub const TAU_LIMIT: f64 = 1e-3;

/// Total-variation distance expected at omega = 1e-8 or 1e8.
pub const LIMIT_TV: f64 = 1e-6;

/// Absolute slack allowed when checking that a total-variation sequence is
/// non-increasing; distances below this are rounding noise.
pub const TV_NOISE_FLOOR: f64 = 1e-15;

/// `tau1 <= 1 + TIE` is classified as `tau1 <= 1` (boundary ties count as "<=").
pub const TAU1_TIE: f64 = 1e-12;

/// Gradient norm (per observation, in logit/log coordinates) at which the
/// MLE iteration stops.
pub const FIT_GRADIENT: f64 = 1e-8;

/// Step size below which the MLE iteration stops.
pub const FIT_STEP: f64 = 1e-10;

/// Central-difference step for the observed-information Hessian.
pub const HESSIAN_STEP: f64 = 1e-5;

/// Half-width of the band around `psi = 1/2`, `psi = 1` and `omega = 1` in
/// which the factor `Delta` is reported as singular.
pub const SINGULAR_BAND: f64 = 1e-6;
