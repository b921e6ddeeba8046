use argmin::core::{CostFunction, Executor, State, TerminationReason};
use argmin::solver::neldermead::NelderMead;
use serde::{Deserialize, Serialize};

use super::CountSample;
use crate::error::{Error, Result};
use crate::special::{ln_choose, sigmoid, xlog1my, xlogy};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinomialFit {
    pub pi_hat: f64,
    pub log_likelihood: f64,
}

/// Closed-form binomial MLE, `pi = mean / n`.
pub fn fit_binomial(sample: &CountSample) -> BinomialFit {
    let n = sample.n;
    let pi_hat = (sample.mean_sufficient_statistics().0 / n as f64).clamp(0.0, 1.0);
    let log_prob: Vec<f64> = (0..=n)
        .map(|y| ln_choose(n, y) + xlogy(y as f64, pi_hat) + xlog1my((n - y) as f64, pi_hat))
        .collect();
    BinomialFit {
        pi_hat,
        log_likelihood: sample.log_likelihood(&log_prob),
    }
}

/// `ln P(Y = y)` for `y = 0..=n` under the beta-binomial, from rising
/// factorials: `B(y + a, n - y + b) / B(a, b) = a^(y) b^(n-y) / (a + b)^(n)`.
pub fn beta_binomial_log_pmf(n: usize, alpha: f64, beta: f64) -> Result<Vec<f64>> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::NonPositiveShape {
            name: "alpha",
            value: alpha,
        });
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::NonPositiveShape {
            name: "beta",
            value: beta,
        });
    }
    let rising = |x: f64| -> Vec<f64> {
        let mut acc = vec![0.0; n + 1];
        for k in 0..n {
            acc[k + 1] = acc[k] + (x + k as f64).ln();
        }
        acc
    };
    let (ra, rb, rab) = (rising(alpha), rising(beta), rising(alpha + beta));
    Ok((0..=n)
        .map(|y| ln_choose(n, y) + ra[y] + rb[n - y] - rab[n])
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaBinomialFit {
    pub alpha: f64,
    pub beta: f64,
    pub log_likelihood: f64,
    pub converged: bool,
    /// The precision `alpha + beta` sits on its search bound (the data are
    /// not overdispersed; the fit degenerates toward a binomial).
    pub at_precision_bound: bool,
    pub iterations: u64,
}

/// Search box for `ln(alpha + beta)`.
const LN_PRECISION_RANGE: (f64, f64) = (-7.0, 25.0);

struct NegLogLik<'a> {
    sample: &'a CountSample,
}

impl NegLogLik<'_> {
    /// `(logit mean, ln precision)` to `(alpha, beta)`, clamping the precision
    /// into its search box.
    fn shapes(point: &[f64]) -> (f64, f64) {
        let mean = sigmoid(point[0]).clamp(1e-300, 1.0 - 1e-16);
        let precision = point[1]
            .clamp(LN_PRECISION_RANGE.0, LN_PRECISION_RANGE.1)
            .exp();
        (mean * precision, (1.0 - mean) * precision)
    }
}

impl CostFunction for NegLogLik<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    /// Negative log-likelihood per observation.
    fn cost(&self, point: &Vec<f64>) -> std::result::Result<f64, argmin::core::Error> {
        let (a, b) = Self::shapes(point);
        match beta_binomial_log_pmf(self.sample.n, a, b) {
            Ok(lp) => Ok(-self.sample.log_likelihood(&lp) / self.sample.total() as f64),
            Err(_) => Ok(f64::INFINITY),
        }
    }
}

/// Beta-binomial MLE by Nelder-Mead on `(logit mean, ln precision)`.
pub fn fit_beta_binomial(sample: &CountSample) -> Result<BetaBinomialFit> {
    let n = sample.n as f64;
    let mean = (sample.mean_sufficient_statistics().0 / n).clamp(1e-3, 1.0 - 1e-3);
    let start = vec![mean.ln() - (-mean).ln_1p(), 2.0];
    let simplex = vec![
        start.clone(),
        vec![start[0] + 0.5, start[1]],
        vec![start[0], start[1] + 1.0],
    ];
    let solver = NelderMead::new(simplex)
        .with_sd_tolerance(1e-12)
        .map_err(|e| Error::Optimizer(e.to_string()))?;
    let result = Executor::new(NegLogLik { sample }, solver)
        .configure(|state| state.max_iters(5000))
        .run()
        .map_err(|e| Error::Optimizer(e.to_string()))?;
    let state = result.state();
    let best = state.get_best_param().cloned().unwrap_or(start);
    let (alpha, beta) = NegLogLik::shapes(&best);
    let converged = matches!(
        state.get_termination_reason(),
        Some(TerminationReason::SolverConverged)
    );
    let at_precision_bound = best[1] >= LN_PRECISION_RANGE.1 || best[1] <= LN_PRECISION_RANGE.0;
    Ok(BetaBinomialFit {
        alpha,
        beta,
        log_likelihood: -state.get_best_cost() * sample.total() as f64,
        converged,
        at_precision_bound,
        iterations: state.get_iter(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_pmf_normalized_and_uniform_case() {
        let lp = beta_binomial_log_pmf(4, 1.0, 1.0).unwrap();
        for l in &lp {
            assert!((l.exp() - 0.2).abs() < 1e-15);
        }
        let lp = beta_binomial_log_pmf(12, 0.7, 3.2).unwrap();
        let total: f64 = lp.iter().map(|l| l.exp()).sum();
        assert!((total - 1.0).abs() < 1e-13);
    }

    #[test]
    fn binomial_fit_is_sample_mean() {
        let s = CountSample::new(4, vec![1, 2, 3, 2, 2]).unwrap();
        let f = fit_binomial(&s);
        // mean = (2 + 6 + 6 + 8) / 10 = 2.2
        assert!((f.pi_hat - 0.55).abs() < 1e-15);
    }

    #[test]
    fn beta_binomial_recovers_overdispersion() {
        // expected counts from Beta(2, 3)-binomial, n = 8
        let lp = beta_binomial_log_pmf(8, 2.0, 3.0).unwrap();
        let counts = lp.iter().map(|l| (l.exp() * 1e6).round() as u64).collect();
        let s = CountSample::new(8, counts).unwrap();
        let f = fit_beta_binomial(&s).unwrap();
        assert!(f.converged && !f.at_precision_bound, "{f:?}");
        assert!(
            (f.alpha - 2.0).abs() < 1e-2 && (f.beta - 3.0).abs() < 1e-2,
            "{f:?}"
        );
    }

    #[test]
    fn underdispersed_data_hit_precision_bound() {
        let s = CountSample::new(6, vec![0, 0, 10, 80, 10, 0, 0]).unwrap();
        let f = fit_beta_binomial(&s).unwrap();
        assert!(f.at_precision_bound);
        let b = fit_binomial(&s);
        assert!((f.log_likelihood - b.log_likelihood).abs() < 1e-3);
    }
}
