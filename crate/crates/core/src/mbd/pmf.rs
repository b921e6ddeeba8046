use serde::{Deserialize, Serialize};

use super::{log_k_terms, log_k_unchecked, log_tau_unchecked, ModelParams};
use crate::error::{Error, Result};
use crate::special::{ln_choose, log_sum_exp};

/// Log-probabilities over the support `{0, ..., n}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PmfTable {
    params: ModelParams,
    log_prob: Vec<f64>,
    log_normalizer: f64,
}

impl PmfTable {
    /// Builds a table from unnormalized log-weights, normalizing by their
    /// log-sum-exp.
    pub(crate) fn from_log_weights(params: ModelParams, weights: Vec<f64>) -> Self {
        Self::from_shifted_log_weights(params, weights, 0.0)
    }

    /// As [`Self::from_log_weights`], for weights from which `offset` was
    /// subtracted; the offset only enters the recorded normalizer.
    pub(crate) fn from_shifted_log_weights(
        params: ModelParams,
        weights: Vec<f64>,
        offset: f64,
    ) -> Self {
        debug_assert_eq!(weights.len(), params.n() + 1);
        let shifted_normalizer = log_sum_exp(&weights);
        let log_prob = weights
            .into_iter()
            .map(|w| w - shifted_normalizer)
            .collect();
        Self {
            params,
            log_prob,
            log_normalizer: shifted_normalizer + offset,
        }
    }

    fn point_mass(params: ModelParams, at: usize, log_normalizer: f64) -> Self {
        let mut log_prob = vec![f64::NEG_INFINITY; params.n() + 1];
        log_prob[at] = 0.0;
        Self {
            params,
            log_prob,
            log_normalizer,
        }
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.params.n()
    }

    pub fn log_probs(&self) -> &[f64] {
        &self.log_prob
    }

    /// `ln K_n` used to normalize the table.
    pub fn log_normalizer(&self) -> f64 {
        self.log_normalizer
    }

    pub fn log_prob(&self, y: usize) -> Option<f64> {
        self.log_prob.get(y).copied()
    }

    pub fn prob(&self, y: usize) -> Option<f64> {
        self.log_prob(y).map(f64::exp)
    }

    pub fn probs(&self) -> Vec<f64> {
        self.log_prob.iter().map(|l| l.exp()).collect()
    }

    /// `P(Y <= y)`.
    pub fn cdf(&self, y: usize) -> Result<f64> {
        self.check_index(y)?;
        Ok(log_sum_exp(&self.log_prob[..=y]).exp().min(1.0))
    }

    /// `P(Y > y)`, summed directly over the upper tail.
    pub fn sf(&self, y: usize) -> Result<f64> {
        self.check_index(y)?;
        Ok(log_sum_exp(&self.log_prob[y + 1..]).exp().min(1.0))
    }

    /// Cumulative distribution over the whole support.
    pub fn cdf_table(&self) -> Vec<f64> {
        let mut acc = f64::NEG_INFINITY;
        self.log_prob
            .iter()
            .map(|&l| {
                acc = crate::special::log_add_exp(acc, l);
                acc.exp().min(1.0)
            })
            .collect()
    }

    /// `sum y p(y)` straight from the table.
    pub fn mean(&self) -> f64 {
        self.log_prob
            .iter()
            .enumerate()
            .map(|(y, l)| y as f64 * l.exp())
            .sum()
    }

    /// `sum (y - mean)^2 p(y)` straight from the table.
    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.log_prob
            .iter()
            .enumerate()
            .map(|(y, l)| (y as f64 - m).powi(2) * l.exp())
            .sum()
    }

    fn check_index(&self, y: usize) -> Result<()> {
        if y > self.n() {
            return Err(Error::IndexOutOfRange {
                index: y,
                lo: 0,
                hi: self.n(),
            });
        }
        Ok(())
    }
}

/// The full probability table for `params`.
pub fn pmf(params: &ModelParams) -> PmfTable {
    let (n, psi, omega) = (params.n(), params.psi(), params.omega());
    if psi == 0.0 {
        return PmfTable::point_mass(*params, 0, log_k_unchecked(n, 0, psi, omega));
    }
    if psi == 1.0 {
        return PmfTable::point_mass(*params, n, 0.0);
    }
    if params.is_independent() {
        // Binomial: K_n = 1, no renormalization needed.
        let (lp, lq) = (psi.ln(), (-psi).ln_1p());
        let log_prob = (0..=n)
            .map(|y| ln_choose(n, y) + y as f64 * lp + (n - y) as f64 * lq)
            .collect();
        return PmfTable {
            params: *params,
            log_prob,
            log_normalizer: 0.0,
        };
    }
    // The terms of K_n are exactly the unnormalized pmf.
    let (terms, shift) = log_k_terms(n, 0, psi, omega);
    PmfTable::from_shifted_log_weights(*params, terms, shift as f64 * omega.ln())
}

/// `P(Y <= y)`.
pub fn cdf(params: &ModelParams, y: usize) -> Result<f64> {
    pmf(params).cdf(y)
}

/// First two moments through the tau ratios.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSummary {
    pub tau1: f64,
    /// Absent for `n = 1`, where `K_{n-2}` is undefined and its coefficient
    /// `(n - 1)` vanishes.
    pub tau2: Option<f64>,
    pub eta: f64,
    pub mean: f64,
    pub variance: f64,
    /// Marginal success probability of a single trial, `psi * tau1`.
    pub pi: f64,
}

/// `E[Y] = n psi tau1`, `V[Y] = n psi eta` with
/// `eta = tau1 - psi (n tau1^2 - (n - 1) tau2)`.
///
/// For `psi > 1/2` the variance formula is evaluated at the mirrored
/// parameters `(n, 1 - psi, omega)`, the law of `n - Y`, and `eta` is
/// recovered as `(1 - psi) eta' / psi`. The two evaluations agree exactly in
/// real arithmetic; the mirrored one keeps `eta` free of the cancellation
/// that occurs when the mass sits near `y = n`.
pub fn moments(params: &ModelParams) -> MomentSummary {
    let n = params.n();
    let psi = params.psi();
    let nf = n as f64;
    let tau1 = log_tau_unchecked(1, params).exp();
    let tau2 = (n >= 2).then(|| log_tau_unchecked(2, params).exp());
    let raw_eta = |p: &ModelParams, t1: f64, t2: Option<f64>| {
        t1 - p.psi() * (nf * t1 * t1 - (nf - 1.0) * t2.unwrap_or(0.0))
    };
    let eta = if psi > 0.5 {
        let mirror =
            ModelParams::new(n, 1.0 - psi, params.omega()).expect("mirror of a valid model");
        let m1 = log_tau_unchecked(1, &mirror).exp();
        let m2 = (n >= 2).then(|| log_tau_unchecked(2, &mirror).exp());
        (1.0 - psi) * raw_eta(&mirror, m1, m2) / psi
    } else {
        raw_eta(params, tau1, tau2)
    };
    // eta carries rounding error of a few ulps; the variance is clamped at 0.
    let variance = (nf * psi * eta).max(0.0);
    MomentSummary {
        tau1,
        tau2,
        eta,
        mean: nf * psi * tau1,
        variance,
        pi: (psi * tau1).min(1.0),
    }
}

/// Per-trial marginal success probability `pi = psi * tau1`.
pub fn marginal_pi(params: &ModelParams) -> f64 {
    (params.psi() * log_tau_unchecked(1, params).exp()).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(n: usize, psi: f64, omega: f64) -> PmfTable {
        pmf(&ModelParams::new(n, psi, omega).unwrap())
    }

    #[test]
    fn binomial_reduction_example() {
        let t = table(3, 0.6, 1.0);
        for (p, e) in t.probs().iter().zip([0.064, 0.288, 0.432, 0.216]) {
            assert!((p - e).abs() < 1e-12);
        }
        assert_eq!(t.log_normalizer(), 0.0);
    }

    #[test]
    fn hand_evaluated_table() {
        let t = table(2, 0.5, 2.0);
        for (p, e) in t.probs().iter().zip([1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0]) {
            assert!((p - e).abs() < 1e-15);
        }
        assert!((t.log_normalizer() - 1.5f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn edge_psi_point_masses() {
        let t = table(5, 0.0, 3.0);
        assert_eq!(t.probs(), vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let t = table(5, 1.0, 0.2);
        assert_eq!(t.probs(), vec![0.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        let m = moments(t.params());
        assert_eq!(m.mean, 5.0);
        assert_eq!(m.variance, 0.0);
        let m = moments(&ModelParams::new(5, 0.0, 3.0).unwrap());
        assert_eq!((m.mean, m.variance, m.pi), (0.0, 0.0, 0.0));
    }

    #[test]
    fn cdf_values() {
        let p = ModelParams::new(2, 0.5, 2.0).unwrap();
        assert!((cdf(&p, 1).unwrap() - 5.0 / 6.0).abs() < 1e-15);
        assert!((cdf(&p, 2).unwrap() - 1.0).abs() < 1e-12);
        let b = ModelParams::new(3, 0.6, 1.0).unwrap();
        assert!((cdf(&b, 1).unwrap() - 0.352).abs() < 1e-12);
        assert!(matches!(cdf(&b, 4), Err(Error::IndexOutOfRange { .. })));
        let t = pmf(&b);
        let table = t.cdf_table();
        for (y, c) in table.iter().enumerate() {
            assert!((c - t.cdf(y).unwrap()).abs() < 1e-15);
            assert!((t.sf(y).unwrap() - (1.0 - t.cdf(y).unwrap())).abs() < 1e-12);
        }
    }

    #[test]
    fn moments_independence_and_symmetry() {
        let m = moments(&ModelParams::new(10, 0.3, 1.0).unwrap());
        assert_eq!(m.tau1, 1.0);
        assert_eq!(m.tau2, Some(1.0));
        assert!((m.mean - 3.0).abs() < 1e-15);
        assert!((m.variance - 2.1).abs() < 1e-14);
        assert_eq!(m.pi, 0.3);

        let m = moments(&ModelParams::new(2, 0.5, 2.0).unwrap());
        assert!((m.mean - 1.0).abs() < 1e-15);
        // Var = 2 * (1/6) = 1/3
        assert!((m.variance - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn single_trial_moments() {
        let p = ModelParams::new(1, 0.3, 5.0).unwrap();
        let m = moments(&p);
        assert_eq!(m.tau2, None);
        // n = 1 has no pairs, so omega is inert
        assert!((m.mean - 0.3).abs() < 1e-15);
        assert!((m.variance - 0.21).abs() < 1e-15);
    }

    #[test]
    fn moments_match_table() {
        let p = ModelParams::new(9, 0.35, 1.8).unwrap();
        let m = moments(&p);
        let t = pmf(&p);
        assert!(((m.mean - t.mean()) / t.mean()).abs() < 1e-10);
        assert!(((m.variance - t.variance()) / t.variance()).abs() < 1e-10);
        assert!((marginal_pi(&p) - m.mean / 9.0).abs() < 1e-12);
    }

    #[test]
    fn marginal_pi_examples() {
        assert_eq!(marginal_pi(&ModelParams::new(7, 0.42, 1.0).unwrap()), 0.42);
        assert!((marginal_pi(&ModelParams::new(2, 0.5, 2.0).unwrap()) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn large_n_stays_finite() {
        for omega in [0.5, 2.0] {
            let t = table(500, 0.3, omega);
            let total: f64 = t.probs().iter().sum();
            assert!((total - 1.0).abs() < 1e-12);
            assert!(t.log_probs().iter().all(|l| l.is_finite()));
        }
    }
}
