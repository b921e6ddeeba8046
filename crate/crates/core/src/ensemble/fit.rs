use serde::{Deserialize, Serialize};

use super::CountSample;
use crate::error::{Error, Result};
use crate::mbd::{pmf, ModelParams};
use crate::special::{logit, sigmoid};
use crate::tolerance::{FIT_GRADIENT, FIT_STEP, HESSIAN_STEP};

/// Bound on each transformed coordinate during the search.
const THETA_BOUND: f64 = 30.0;
const MAX_ITERATIONS: usize = 200;
const MAX_HALVINGS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub psi_hat: f64,
    pub omega_hat: f64,
    pub log_likelihood: f64,
    pub converged: bool,
    /// The maximum lies on the boundary of the parameter space; the reported
    /// estimates are the last iterate, not an MLE.
    pub boundary: bool,
    pub iterations: usize,
    /// Gradient norm per observation in `(logit psi, ln omega)`.
    pub gradient_norm: f64,
    /// Standard errors of `(psi_hat, omega_hat)`.
    pub standard_errors: Option<(f64, f64)>,
    /// Largest absolute gap between the sample's mean sufficient statistics
    /// `(y, y (n - y))` and their expectations under the fitted model.
    pub suffstat_residual: f64,
}

/// Whether the sample mean of `(y, y (n - y))` lies in the interior of the
/// convex hull of the support, i.e. the MLE exists in the open box.
///
/// The support points lie on a concave parabola, so the hull's faces are the
/// chords between neighbours `{y, y + 1}` and the base `{0, n}`.
pub fn mle_exists(sample: &CountSample) -> bool {
    let support = sample.support();
    match support.as_slice() {
        [a, b] => b - a > 1 && !(*a == 0 && *b == sample.n),
        s => s.len() >= 3,
    }
}

struct Evaluation {
    log_likelihood: f64,
    /// `T_bar - E[T]`, per observation.
    score: [f64; 2],
    /// `Cov(T)` under the model.
    information: [[f64; 2]; 2],
}

fn params_at(n: usize, theta: [f64; 2]) -> Result<ModelParams> {
    ModelParams::new(n, sigmoid(theta[0]), theta[1].exp())
}

fn log_likelihood_at(sample: &CountSample, theta: [f64; 2]) -> Result<f64> {
    Ok(sample.log_likelihood(pmf(&params_at(sample.n, theta)?).log_probs()))
}

fn evaluate(sample: &CountSample, theta: [f64; 2]) -> Result<Evaluation> {
    let n = sample.n;
    let table = pmf(&params_at(n, theta)?);
    let (mut e1, mut e2, mut e11, mut e12, mut e22) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (y, p) in table.probs().into_iter().enumerate() {
        let t1 = y as f64;
        let t2 = (y * (n - y)) as f64;
        e1 += p * t1;
        e2 += p * t2;
        e11 += p * t1 * t1;
        e12 += p * t1 * t2;
        e22 += p * t2 * t2;
    }
    let (m1, m2) = sample.mean_sufficient_statistics();
    Ok(Evaluation {
        log_likelihood: sample.log_likelihood(table.log_probs()),
        score: [m1 - e1, m2 - e2],
        information: [
            [e11 - e1 * e1, e12 - e1 * e2],
            [e12 - e1 * e2, e22 - e2 * e2],
        ],
    })
}

fn solve2(a: [[f64; 2]; 2], b: [f64; 2]) -> Option<[f64; 2]> {
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if !(det.is_finite() && det > 0.0) {
        return None;
    }
    Some([
        (a[1][1] * b[0] - a[0][1] * b[1]) / det,
        (a[0][0] * b[1] - a[1][0] * b[0]) / det,
    ])
}

fn clamp_theta(theta: [f64; 2]) -> [f64; 2] {
    theta.map(|t| t.clamp(-THETA_BOUND, THETA_BOUND))
}

/// Observed information of the total log-likelihood by central differences in
/// `(logit psi, ln omega)`, inverted and mapped to `(psi, omega)`.
fn standard_errors(sample: &CountSample, theta: [f64; 2]) -> Option<(f64, f64)> {
    let h = HESSIAN_STEP;
    let f = |d0: f64, d1: f64| log_likelihood_at(sample, [theta[0] + d0, theta[1] + d1]).ok();
    let f0 = f(0.0, 0.0)?;
    let h00 = (f(h, 0.0)? - 2.0 * f0 + f(-h, 0.0)?) / (h * h);
    let h11 = (f(0.0, h)? - 2.0 * f0 + f(0.0, -h)?) / (h * h);
    let h01 = (f(h, h)? - f(h, -h)? - f(-h, h)? + f(-h, -h)?) / (4.0 * h * h);
    let (a, b, c) = (-h00, -h01, -h11);
    let det = a * c - b * b;
    if !(det > 0.0 && a > 0.0) {
        return None;
    }
    let (var0, var1) = (c / det, a / det);
    let psi = sigmoid(theta[0]);
    let omega = theta[1].exp();
    Some((psi * (1.0 - psi) * var0.sqrt(), omega * var1.sqrt()))
}

/// Maximum-likelihood estimate of `(psi, omega)` from counts.
///
/// Newton iteration on the natural parameters `(logit psi, ln omega)`, where
/// the log-likelihood is concave with Hessian `-N Cov(T)`, backed by step
/// halving.
pub fn fit_mle(sample: &CountSample) -> Result<FitResult> {
    let n = sample.n;
    if n < 2 {
        return Err(Error::InvalidSample(format!(
            "n = {n}: the dependence parameter needs at least two trials"
        )));
    }
    let exists = mle_exists(sample);
    let mean = sample.mean_sufficient_statistics().0 / n as f64;
    let mut theta = clamp_theta([logit(mean.clamp(1e-6, 1.0 - 1e-6)), 0.0]);
    let mut current = evaluate(sample, theta)?;
    let mut iterations = 0;
    let mut converged = false;

    while iterations < MAX_ITERATIONS {
        if norm(current.score) < FIT_GRADIENT {
            converged = true;
            break;
        }
        iterations += 1;
        let Some(direction) = solve2(current.information, current.score) else {
            break;
        };
        let mut scale = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let trial = clamp_theta([
                theta[0] + scale * direction[0],
                theta[1] + scale * direction[1],
            ]);
            let candidate = evaluate(sample, trial)?;
            if candidate.log_likelihood.is_finite()
                && candidate.log_likelihood >= current.log_likelihood
            {
                accepted = Some((trial, candidate));
                break;
            }
            scale *= 0.5;
        }
        let Some((next, candidate)) = accepted else {
            break;
        };
        let step = norm([next[0] - theta[0], next[1] - theta[1]]);
        theta = next;
        current = candidate;
        if step < FIT_STEP {
            converged = norm(current.score) < FIT_GRADIENT.sqrt();
            break;
        }
    }

    let converged = converged && exists;
    let params = params_at(n, theta)?;
    Ok(FitResult {
        psi_hat: params.psi(),
        omega_hat: params.omega(),
        log_likelihood: current.log_likelihood,
        converged,
        boundary: !exists,
        iterations,
        gradient_norm: norm(current.score),
        standard_errors: if converged {
            standard_errors(sample, theta)
        } else {
            None
        },
        suffstat_residual: current.score[0].abs().max(current.score[1].abs()),
    })
}

fn norm(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}
