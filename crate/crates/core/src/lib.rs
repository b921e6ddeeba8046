//! Exact log-domain engine for the multiplicative binomial distribution of a
//! sum of `n` exchangeable, possibly dependent, binary trials.
//!
//! - [`mbd`]: pmf, cdf, moments, joint law, sampling, brute-force oracle.
//! - [`asymptotics`]: closed-form limit laws as `omega -> 0` or `omega -> inf`.
//! - [`gauss`]: distance of the standardized law to the standard normal.
//! - [`factorization`]: the `K_{n-1} - K_n` factorization and `tau_1` regions.
//! - [`ensemble`]: majority-vote accuracy, baselines and maximum likelihood.

pub mod asymptotics;
pub mod ensemble;
pub mod error;
pub mod factorization;
pub mod gauss;
pub mod mbd;
pub mod special;
pub mod tolerance;

pub use error::{Error, Result};
pub use mbd::{
    cdf, conditional_cpr, enumerate_pmf_oracle, joint_log_prob, log_k, marginal_pi, moments, pmf,
    sample, tau, ModelParams, MomentSummary, PmfTable,
};
