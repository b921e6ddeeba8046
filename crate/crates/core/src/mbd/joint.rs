//! The exchangeable joint law of the individual trials.
//!
//! `P(Z = z) = psi^y (1 - psi)^(n - y) omega^((n - y) y) / K_n` with
//! `y = sum z`; dividing the pmf by the `C(n, y)` arrangements of `y`
//! successes recovers it.

use serde::{Deserialize, Serialize};

use super::{log_k_unchecked, ModelParams, PmfTable};
use crate::error::{Error, Result};
use crate::special::{log_add_exp, xlog1my, xlogy};

/// Largest `n` the brute-force oracle will enumerate (2^20 vectors).
pub const ORACLE_MAX_N: usize = 20;

/// One configuration of the `n` trials with its log probability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointOutcome {
    pub bits: Vec<bool>,
    pub log_prob: f64,
}

impl JointOutcome {
    pub fn new(params: &ModelParams, bits: Vec<bool>) -> Result<Self> {
        let log_prob = joint_log_prob(params, &bits)?;
        Ok(Self { bits, log_prob })
    }

    pub fn successes(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

/// Log probability of one ordered configuration.
pub fn joint_log_prob(params: &ModelParams, bits: &[bool]) -> Result<f64> {
    let n = params.n();
    if bits.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: bits.len(),
        });
    }
    let y = bits.iter().filter(|&&b| b).count();
    let (psi, omega) = (params.psi(), params.omega());
    let exponent = ((n - y) * y) as f64;
    let interaction = if exponent == 0.0 {
        0.0
    } else {
        exponent * omega.ln()
    };
    Ok(
        xlogy(y as f64, psi) + xlog1my((n - y) as f64, psi) + interaction
            - log_k_unchecked(n, 0, psi, omega),
    )
}

/// Cross-product ratio of the first two trials given the remaining `n - 2`.
///
/// The value does not depend on the conditioning configuration; the rest is
/// taken as all failures. Equals `omega^-2`.
pub fn conditional_cpr(params: &ModelParams) -> Result<f64> {
    let n = params.n();
    if n < 2 {
        return Err(Error::TrialCount { n, min: 2 });
    }
    conditional_cpr_given(params, &vec![false; n - 2])
}

/// Cross-product ratio of the first two trials given an explicit
/// configuration `rest` of the other `n - 2`.
pub fn conditional_cpr_given(params: &ModelParams, rest: &[bool]) -> Result<f64> {
    let n = params.n();
    if n < 2 {
        return Err(Error::TrialCount { n, min: 2 });
    }
    if !params.has_interior_psi() {
        return Err(Error::DegeneratePsi {
            op: "conditional_cpr",
            psi: params.psi(),
        });
    }
    if rest.len() != n - 2 {
        return Err(Error::LengthMismatch {
            expected: n - 2,
            actual: rest.len(),
        });
    }
    let lp = |zi: bool, zj: bool| -> Result<f64> {
        let mut bits = Vec::with_capacity(n);
        bits.push(zi);
        bits.push(zj);
        bits.extend_from_slice(rest);
        joint_log_prob(params, &bits)
    };
    let log_cpr = lp(true, true)? + lp(false, false)? - lp(true, false)? - lp(false, true)?;
    Ok(log_cpr.exp())
}

/// Ground-truth pmf by brute force over all `2^n` binary vectors.
///
/// Each vector is weighted as a product of per-trial factors (`psi` or
/// `1 - psi`) and one factor `omega` per discordant pair of trials; no
/// binomial coefficient or normalizing sum is involved. Weights are grouped by
/// the number of successes and normalized at the end.
pub fn enumerate_pmf_oracle(params: &ModelParams) -> Result<PmfTable> {
    let n = params.n();
    if n > ORACLE_MAX_N {
        return Err(Error::OracleTooLarge {
            n,
            limit: ORACLE_MAX_N,
        });
    }
    let (psi, omega) = (params.psi(), params.omega());
    let ln_success = if psi == 0.0 {
        f64::NEG_INFINITY
    } else {
        psi.ln()
    };
    let ln_failure = if psi == 1.0 {
        f64::NEG_INFINITY
    } else {
        (-psi).ln_1p()
    };
    let ln_omega = omega.ln();

    let mut grouped = vec![f64::NEG_INFINITY; n + 1];
    for mask in 0u32..(1u32 << n) {
        let bit = |i: usize| mask >> i & 1 == 1;
        let mut w = 0.0;
        let mut discordant = 0u32;
        for i in 0..n {
            w += if bit(i) { ln_success } else { ln_failure };
            for j in i + 1..n {
                if bit(i) != bit(j) {
                    discordant += 1;
                }
            }
        }
        if discordant > 0 {
            w += discordant as f64 * ln_omega;
        }
        let y = mask.count_ones() as usize;
        grouped[y] = log_add_exp(grouped[y], w);
    }
    Ok(PmfTable::from_log_weights(*params, grouped))
}
