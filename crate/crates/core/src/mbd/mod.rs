//! Exact evaluation of the multiplicative binomial law
//!
//! ```text
//! P(Y = y) = C(n, y) psi^y (1 - psi)^(n - y) omega^((n - y) y) / K_n
//! ```
//!
//! for the number of successes among `n` exchangeable binary trials. Every
//! quantity is assembled in the log domain: the interaction factor
//! `omega^((n - y) y)` has a natural-log exponent of order `n^2 / 4 * |ln omega|`,
//! which leaves double-precision range for quite modest `n`.
//!
//! The partial normalizers
//!
//! ```text
//! K_{n-a} = sum_{i=0}^{n-a} C(n-a, i) psi^i (1-psi)^(n-a-i) omega^((n-a-i)(i+a))
//! ```
//!
//! and their ratios `tau_r = K_{n-r} / K_n` drive the moments and the
//! marginal success probability `pi = psi * tau_1`.

mod joint;
mod pmf;
mod sample;

pub use joint::{
    conditional_cpr, conditional_cpr_given, enumerate_pmf_oracle, joint_log_prob, JointOutcome,
    ORACLE_MAX_N,
};
pub use pmf::{cdf, marginal_pi, moments, pmf, MomentSummary, PmfTable};
pub use sample::{sample, Sampler};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{ln_choose, log_sum_exp, xlog1my, xlogy};

/// The triple `(n, psi, omega)` defining one distribution instance.
///
/// `psi` is the independence marginal probability (it equals the per-trial
/// success probability only when `omega == 1`); `omega` is the intra-unit
/// association, `< 1` for positive and `> 1` for negative dependence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    n: usize,
    psi: f64,
    omega: f64,
}

impl ModelParams {
    pub fn new(n: usize, psi: f64, omega: f64) -> Result<Self> {
        validate(n, psi, omega)?;
        Ok(Self { n, psi, omega })
    }

    /// Independent trials: a plain binomial.
    pub fn binomial(n: usize, p: f64) -> Result<Self> {
        Self::new(n, p, 1.0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn psi(&self) -> f64 {
        self.psi
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn is_independent(&self) -> bool {
        self.omega == 1.0
    }

    /// `psi` strictly inside `(0, 1)`.
    pub fn has_interior_psi(&self) -> bool {
        self.psi > 0.0 && self.psi < 1.0
    }

    pub fn with_n(&self, n: usize) -> Result<Self> {
        Self::new(n, self.psi, self.omega)
    }

    pub fn with_omega(&self, omega: f64) -> Result<Self> {
        Self::new(self.n, self.psi, omega)
    }

    pub fn with_psi(&self, psi: f64) -> Result<Self> {
        Self::new(self.n, psi, self.omega)
    }
}

fn validate(n: usize, psi: f64, omega: f64) -> Result<()> {
    if n < 1 {
        return Err(Error::TrialCount { n, min: 1 });
    }
    if !(0.0..=1.0).contains(&psi) {
        return Err(Error::PsiOutOfRange(psi));
    }
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::OmegaNotPositive(omega));
    }
    Ok(())
}

/// `ln K_{n-a}(psi, omega)`.
pub fn log_k(n: usize, a: usize, psi: f64, omega: f64) -> Result<f64> {
    validate(n, psi, omega)?;
    if a > n {
        return Err(Error::IndexOutOfRange {
            index: a,
            lo: 0,
            hi: n,
        });
    }
    Ok(log_k_unchecked(n, a, psi, omega))
}

/// Per-term logs of `K_{n-a}`, indexed by the summation variable `i`, with
/// `shift * ln omega` removed from every term.
///
/// For `omega > 1` the interaction exponent `(n-a-i)(i+a)` is reduced by its
/// maximum `shift` before scaling by `ln omega`, so the dominant terms carry
/// small, accurately rounded logs even when `n^2 ln omega` is large.
pub(crate) fn log_k_terms(n: usize, a: usize, psi: f64, omega: f64) -> (Vec<f64>, usize) {
    let m = n - a;
    let ln_omega = omega.ln();
    let shift = if ln_omega > 0.0 {
        (0..=m).map(|i| (m - i) * (i + a)).max().unwrap_or(0)
    } else {
        0
    };
    let terms = (0..=m)
        .map(|i| {
            let exponent = (m - i) * (i + a);
            let interaction = if exponent == shift {
                0.0
            } else {
                (exponent as f64 - shift as f64) * ln_omega
            };
            ln_choose(m, i) + xlogy(i as f64, psi) + xlog1my((m - i) as f64, psi) + interaction
        })
        .collect();
    (terms, shift)
}

/// `ln K_{n-a} - shift * ln omega`, with the `shift` of [`log_k_terms`].
fn log_k_shifted(n: usize, a: usize, psi: f64, omega: f64) -> (f64, usize) {
    let (terms, shift) = log_k_terms(n, a, psi, omega);
    (log_sum_exp(&terms), shift)
}

pub(crate) fn log_k_unchecked(n: usize, a: usize, psi: f64, omega: f64) -> f64 {
    // binomial theorem
    if omega == 1.0 {
        return 0.0;
    }
    let (value, shift) = log_k_shifted(n, a, psi, omega);
    value + shift as f64 * omega.ln()
}

/// `ln tau_r = ln K_{n-r} - ln K_n`.
pub fn log_tau(r: usize, params: &ModelParams) -> Result<f64> {
    let n = params.n;
    if r < 1 || r > n {
        return Err(Error::IndexOutOfRange {
            index: r,
            lo: 1,
            hi: n,
        });
    }
    Ok(log_tau_unchecked(r, params))
}

pub(crate) fn log_tau_unchecked(r: usize, params: &ModelParams) -> f64 {
    let ModelParams { n, psi, omega } = *params;
    if omega == 1.0 {
        return 0.0;
    }
    let (top, top_shift) = log_k_shifted(n, r, psi, omega);
    let (bottom, bottom_shift) = log_k_shifted(n, 0, psi, omega);
    top - bottom + (top_shift as f64 - bottom_shift as f64) * omega.ln()
}

/// `tau_r = K_{n-r} / K_n` for `1 <= r <= n`.
pub fn tau(r: usize, params: &ModelParams) -> Result<f64> {
    log_tau(r, params).map(f64::exp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_validation() {
        assert!(ModelParams::new(0, 0.5, 1.0).is_err());
        assert!(ModelParams::new(3, -0.1, 1.0).is_err());
        assert!(ModelParams::new(3, 1.1, 1.0).is_err());
        assert!(ModelParams::new(3, f64::NAN, 1.0).is_err());
        assert!(ModelParams::new(3, 0.5, 0.0).is_err());
        assert!(ModelParams::new(3, 0.5, f64::INFINITY).is_err());
        let p = ModelParams::new(3, 0.0, 1.0).unwrap();
        assert!(p.is_independent());
        assert!(!p.has_interior_psi());
    }

    #[test]
    fn log_k_independence_is_exactly_zero() {
        for n in 1..20 {
            for a in 0..=n {
                assert_eq!(log_k(n, a, 0.37, 1.0).unwrap(), 0.0);
            }
        }
    }

    #[test]
    fn log_k_hand_values() {
        // K_2 = 0.25 + 2 * 0.25 * 2 + 0.25
        let k2 = log_k(2, 0, 0.5, 2.0).unwrap();
        assert!((k2 - 1.5f64.ln()).abs() < 1e-15);
        // K_1 = (1 - psi) * omega + psi
        let k1 = log_k(2, 1, 0.5, 2.0).unwrap();
        assert!((k1 - 1.5f64.ln()).abs() < 1e-15);
        // K_0 is the empty product
        assert_eq!(log_k(5, 5, 0.3, 7.0).unwrap(), 0.0);
    }

    #[test]
    fn log_k_rejects_bad_domain() {
        assert!(matches!(
            log_k(3, 4, 0.5, 1.0),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            log_k(3, 0, 1.5, 1.0),
            Err(Error::PsiOutOfRange(_))
        ));
        assert!(matches!(
            log_k(3, 0, 0.5, -1.0),
            Err(Error::OmegaNotPositive(_))
        ));
    }

    #[test]
    fn log_k_edge_psi() {
        // psi = 0 keeps only i = 0: omega^((n-a) a)
        let v = log_k(6, 2, 0.0, 3.0).unwrap();
        assert!((v - 8.0 * 3f64.ln()).abs() < 1e-12);
        // psi = 1 keeps only i = n - a, whose omega exponent vanishes
        assert_eq!(log_k(6, 2, 1.0, 3.0).unwrap(), 0.0);
    }

    #[test]
    fn tau_values() {
        let p = ModelParams::new(2, 0.5, 2.0).unwrap();
        assert!((tau(1, &p).unwrap() - 1.0).abs() < 1e-15);
        let ind = ModelParams::new(9, 0.2, 1.0).unwrap();
        for r in 1..=9 {
            assert_eq!(tau(r, &ind).unwrap(), 1.0);
        }
        assert!(tau(0, &p).is_err());
        assert!(tau(3, &p).is_err());
        // odd-n large-omega regime
        let p = ModelParams::new(5, 0.3, 1e6).unwrap();
        assert!((tau(1, &p).unwrap() - 2.3 / 1.5).abs() < 1e-3);
    }
}
