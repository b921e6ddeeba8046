use serde::{Deserialize, Serialize};

use super::{
    beta_binomial_accuracy, binomial_accuracy, ensemble_accuracy, fit_beta_binomial, fit_binomial,
    fit_mle, CountSample, EnsembleSpec,
};
use crate::error::Result;
use crate::mbd::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Lmbd,
    Binomial,
    BetaBinomial,
}

/// One fitted model in a comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSummary {
    pub kind: ModelKind,
    /// Fitted parameters: `(psi, omega)`, `(pi)` or `(alpha, beta)`.
    pub parameters: Vec<f64>,
    pub parameter_count: usize,
    pub log_likelihood: f64,
    /// `2k - 2 log L`.
    pub aic: f64,
    pub predicted_accuracy: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelComparison {
    pub n: usize,
    pub observations: u64,
    pub empirical_accuracy: f64,
    pub models: Vec<ModelSummary>,
    /// Model with the smallest AIC.
    pub best_by_aic: ModelKind,
}

impl ModelComparison {
    pub fn model(&self, kind: ModelKind) -> &ModelSummary {
        self.models
            .iter()
            .find(|m| m.kind == kind)
            .expect("every kind is fitted")
    }
}

fn summary(
    kind: ModelKind,
    parameters: Vec<f64>,
    log_likelihood: f64,
    predicted_accuracy: f64,
    converged: bool,
) -> ModelSummary {
    let parameter_count = parameters.len();
    ModelSummary {
        kind,
        parameters,
        parameter_count,
        log_likelihood,
        aic: 2.0 * parameter_count as f64 - 2.0 * log_likelihood,
        predicted_accuracy,
        converged,
    }
}

/// Fits the dependence model and both baselines to `sample` and ranks them
/// by AIC.
pub fn model_comparison(sample: &CountSample) -> Result<ModelComparison> {
    let n = sample.n;
    let lmbd = fit_mle(sample)?;
    let binomial = fit_binomial(sample);
    let beta = fit_beta_binomial(sample)?;

    let lmbd_params = ModelParams::new(n, lmbd.psi_hat, lmbd.omega_hat)?;
    let models = vec![
        summary(
            ModelKind::Lmbd,
            vec![lmbd.psi_hat, lmbd.omega_hat],
            lmbd.log_likelihood,
            ensemble_accuracy(&EnsembleSpec::new(lmbd_params)),
            lmbd.converged,
        ),
        summary(
            ModelKind::Binomial,
            vec![binomial.pi_hat],
            binomial.log_likelihood,
            binomial_accuracy(n, binomial.pi_hat)?,
            true,
        ),
        summary(
            ModelKind::BetaBinomial,
            vec![beta.alpha, beta.beta],
            beta.log_likelihood,
            beta_binomial_accuracy(n, beta.alpha, beta.beta)?,
            beta.converged,
        ),
    ];
    let best_by_aic = models
        .iter()
        .min_by(|a, b| a.aic.total_cmp(&b.aic))
        .map(|m| m.kind)
        .expect("three models");
    Ok(ModelComparison {
        n,
        observations: sample.total(),
        empirical_accuracy: sample.empirical_accuracy(),
        models,
        best_by_aic,
    })
}
