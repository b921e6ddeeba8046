//! Majority-vote accuracy of `n` dependent classifiers sharing one
//! individual success probability, plus likelihood fitting of the dependence
//! model and two baselines (binomial, beta-binomial) from observed counts of
//! correct votes.

mod baseline;
mod compare;
mod fit;

pub use baseline::{
    beta_binomial_log_pmf, fit_beta_binomial, fit_binomial, BetaBinomialFit, BinomialFit,
};
pub use compare::{model_comparison, ModelComparison, ModelKind, ModelSummary};
pub use fit::{fit_mle, mle_exists, FitResult};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mbd::{pmf, ModelParams};
use crate::special::{ln_choose, log_sum_exp, xlog1my, xlogy};

/// Largest number of correct votes that still loses the majority vote:
/// `n / 2` for even `n`, `(n - 1) / 2` for odd `n`. Ties count as failures.
pub fn majority_threshold(n: usize) -> usize {
    n / 2
}

/// An ensemble of `n` classifiers whose correct-vote count follows `params`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub n: usize,
    pub params: ModelParams,
}

impl EnsembleSpec {
    pub fn new(params: ModelParams) -> Self {
        Self {
            n: params.n(),
            params,
        }
    }
}

/// `P(Y > q)`, the probability that a strict majority votes correctly.
pub fn ensemble_accuracy(spec: &EnsembleSpec) -> f64 {
    pmf(&spec.params)
        .sf(majority_threshold(spec.n))
        .expect("threshold lies in the support")
}

/// Independence baseline: binomial tail above the majority threshold.
pub fn binomial_accuracy(n: usize, pi: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::TrialCount { n, min: 1 });
    }
    if !(0.0..=1.0).contains(&pi) {
        return Err(Error::PsiOutOfRange(pi));
    }
    let q = majority_threshold(n);
    let terms: Vec<f64> = (q + 1..=n)
        .map(|y| ln_choose(n, y) + xlogy(y as f64, pi) + xlog1my((n - y) as f64, pi))
        .collect();
    Ok(log_sum_exp(&terms).exp().min(1.0))
}

/// Beta-binomial baseline: the success probability itself drawn from
/// `Beta(alpha, beta)`.
pub fn beta_binomial_accuracy(n: usize, alpha: f64, beta: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::TrialCount { n, min: 1 });
    }
    let log_pmf = beta_binomial_log_pmf(n, alpha, beta)?;
    Ok(log_sum_exp(&log_pmf[majority_threshold(n) + 1..])
        .exp()
        .min(1.0))
}

/// Observed frequencies of each count `y` in `{0, ..., n}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountSample {
    pub n: usize,
    pub counts: Vec<u64>,
}

impl CountSample {
    pub fn new(n: usize, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != n + 1 {
            return Err(Error::LengthMismatch {
                expected: n + 1,
                actual: counts.len(),
            });
        }
        if counts.iter().sum::<u64>() == 0 {
            return Err(Error::InvalidSample("no observations".into()));
        }
        Ok(Self { n, counts })
    }

    /// Tallies raw draws.
    pub fn from_draws(n: usize, draws: &[usize]) -> Result<Self> {
        let mut counts = vec![0u64; n + 1];
        for &y in draws {
            if y > n {
                return Err(Error::IndexOutOfRange {
                    index: y,
                    lo: 0,
                    hi: n,
                });
            }
            counts[y] += 1;
        }
        Self::new(n, counts)
    }

    /// Tallies `(y, count)` pairs, adding repeated `y`.
    pub fn from_pairs(n: usize, pairs: &[(usize, u64)]) -> Result<Self> {
        let mut counts = vec![0u64; n + 1];
        for &(y, c) in pairs {
            if y > n {
                return Err(Error::IndexOutOfRange {
                    index: y,
                    lo: 0,
                    hi: n,
                });
            }
            counts[y] += c;
        }
        Self::new(n, counts)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Observed values with non-zero count.
    pub fn support(&self) -> Vec<usize> {
        (0..=self.n).filter(|&y| self.counts[y] > 0).collect()
    }

    /// Per-observation averages of the sufficient statistics `y` and `y (n - y)`.
    pub fn mean_sufficient_statistics(&self) -> (f64, f64) {
        let total = self.total() as f64;
        let (mut s1, mut s2) = (0.0, 0.0);
        for (y, &c) in self.counts.iter().enumerate() {
            let c = c as f64;
            s1 += c * y as f64;
            s2 += c * (y * (self.n - y)) as f64;
        }
        (s1 / total, s2 / total)
    }

    /// `sum_y counts[y] * log_prob[y]`, with empty cells contributing nothing.
    pub fn log_likelihood(&self, log_prob: &[f64]) -> f64 {
        self.counts
            .iter()
            .zip(log_prob)
            .filter(|(&c, _)| c > 0)
            .map(|(&c, &l)| c as f64 * l)
            .sum()
    }

    /// Fraction of observations with a strict majority.
    pub fn empirical_accuracy(&self) -> f64 {
        let above: u64 = self.counts[majority_threshold(self.n) + 1..].iter().sum();
        above as f64 / self.total() as f64
    }
}
