//! Distance between the standardized law and the standard normal.
//!
//! `Z = (Y - n psi tau1) / sqrt(n psi eta)`; the diagnostic is
//! `sup_y |F(y) - Phi(z_y)|` over the support, with `F` taken at its
//! right-continuous values.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mbd::{moments, pmf, ModelParams};
use crate::special::normal_cdf;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CltScanRow {
    pub n: usize,
    pub psi: f64,
    pub omega: f64,
    pub ks_distance: f64,
}

/// Kolmogorov distance of the standardized count to `N(0, 1)`.
pub fn standardized_ks_distance(params: &ModelParams) -> Result<f64> {
    let m = moments(params);
    if m.variance <= 0.0 || m.variance.is_nan() {
        return Err(Error::DegenerateVariance(m.variance));
    }
    let sd = m.variance.sqrt();
    let cdf = pmf(params).cdf_table();
    let ks = cdf
        .iter()
        .enumerate()
        .map(|(y, f)| (f - normal_cdf((y as f64 - m.mean) / sd)).abs())
        .fold(0.0, f64::max);
    Ok(ks.min(1.0))
}

/// One row per `n`, in input order.
pub fn clt_scan(ns: &[usize], psi: f64, omega: f64) -> Result<Vec<CltScanRow>> {
    if ns.is_empty() || ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid { axis: "n" });
    }
    let params: Vec<ModelParams> = ns
        .iter()
        .map(|&n| ModelParams::new(n, psi, omega))
        .collect::<Result<_>>()?;
    params
        .par_iter()
        .map(|p| {
            Ok(CltScanRow {
                n: p.n(),
                psi,
                omega,
                ks_distance: standardized_ks_distance(p)?,
            })
        })
        .collect()
}
