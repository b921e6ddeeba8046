//! The difference `D_n = K_{n-1} - K_n` and its factorization
//!
//! ```text
//! D_n = Delta (psi - 1)(2 psi - 1)(omega - 1)              n even
//! D_n = Delta (psi - 1)(2 psi - 1)(omega - 1)(omega + 1)   n odd
//! ```
//!
//! Since `tau_1 = K_{n-1} / K_n`, the sign of `D_n` decides whether the
//! marginal `pi = psi tau_1` lies below or above `psi`.
//!
//! `Delta` is available two ways. [`delta`] divides the log-domain `D_n` by
//! the factor product. [`delta_positive_sum`] pairs term `i` of
//! `(1 - psi) sum_i C(n-1, i) psi^i (1-psi)^(n-1-i) omega^((n-i) i) (omega^(n-1-2i) - 1)`
//! with term `n-1-i`, which leaves
//!
//! ```text
//! Delta = sum_{i : m_i > 0} C(n-1, i) (psi (1-psi))^i omega^((n-i) i) G(omega) S(psi)
//! m_i   = n - 1 - 2i
//! S     = sum_{k < m_i} (1-psi)^(m_i-1-k) psi^k
//! G     = sum_{k < m_i} omega^k             (n even)
//! G     = sum_{k < m_i / 2} omega^(2k)      (n odd)
//! ```
//!
//! a sum of non-negative terms.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mbd::{log_k_unchecked, ModelParams};
use crate::special::{exp_diff, ln_choose, log_sum_exp, xlog1my, xlogy};
use crate::tolerance::{SINGULAR_BAND, TAU1_TIE};

/// `K_{n-1} - K_n`, differenced after factoring out the larger exponent.
pub fn d_n(params: &ModelParams) -> f64 {
    let (n, psi, omega) = (params.n(), params.psi(), params.omega());
    exp_diff(
        log_k_unchecked(n, 1, psi, omega),
        log_k_unchecked(n, 0, psi, omega),
    )
}

/// `(psi - 1)(2 psi - 1)(omega - 1)`, times `(omega + 1)` for odd `n`.
pub fn factor_product(params: &ModelParams) -> f64 {
    let (psi, omega) = (params.psi(), params.omega());
    let base = (psi - 1.0) * (2.0 * psi - 1.0) * (omega - 1.0);
    if params.n() % 2 == 1 {
        base * (omega + 1.0)
    } else {
        base
    }
}

/// Whether `params` lies within [`SINGULAR_BAND`] of the set where the
/// factor product vanishes.
pub fn is_singular(params: &ModelParams) -> bool {
    let (psi, omega) = (params.psi(), params.omega());
    (psi - 0.5).abs() < SINGULAR_BAND
        || (1.0 - psi).abs() < SINGULAR_BAND
        || (omega - 1.0).abs() < SINGULAR_BAND
}

/// `Delta`, or a marker where it is `0 / 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaValue {
    Defined(f64),
    Singular,
}

impl DeltaValue {
    pub fn value(self) -> Option<f64> {
        match self {
            DeltaValue::Defined(v) => Some(v),
            DeltaValue::Singular => None,
        }
    }
}

/// `D_n` divided by the parity-appropriate factor product.
pub fn delta(params: &ModelParams) -> DeltaValue {
    if is_singular(params) {
        return DeltaValue::Singular;
    }
    DeltaValue::Defined(d_n(params) / factor_product(params))
}

/// `Delta` from its expansion into non-negative terms; defined on the whole
/// parameter domain, including the singular set.
pub fn delta_positive_sum(params: &ModelParams) -> f64 {
    let (n, psi, omega) = (params.n(), params.psi(), params.omega());
    let odd = n % 2 == 1;
    let ln_omega = omega.ln();
    let mut terms = Vec::new();
    let mut i = 0;
    while 2 * i + 1 < n {
        let m = n - 1 - 2 * i;
        let ln_g = if odd {
            log_sum_exp(
                &(0..m / 2)
                    .map(|k| (2 * k) as f64 * ln_omega)
                    .collect::<Vec<_>>(),
            )
        } else {
            log_sum_exp(&(0..m).map(|k| k as f64 * ln_omega).collect::<Vec<_>>())
        };
        let ln_s = log_sum_exp(
            &(0..m)
                .map(|k| xlog1my((m - 1 - k) as f64, psi) + xlogy(k as f64, psi))
                .collect::<Vec<_>>(),
        );
        let ii = i as f64;
        terms.push(
            ln_choose(n - 1, i)
                + xlogy(ii, psi)
                + xlog1my(ii, psi)
                + ((n - i) * i) as f64 * ln_omega
                + ln_g
                + ln_s,
        );
        i += 1;
    }
    log_sum_exp(&terms).exp()
}

/// Axes of a `(psi, omega)` grid for a fixed `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n: usize,
    pub psi_values: Vec<f64>,
    pub omega_values: Vec<f64>,
}

/// `steps` evenly spaced points from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let last = (steps - 1) as f64;
            (0..steps)
                .map(|k| lo + (hi - lo) * (k as f64 / last))
                .collect()
        }
    }
}

impl GridSpec {
    pub fn new(n: usize, psi_values: Vec<f64>, omega_values: Vec<f64>) -> Result<Self> {
        let increasing = |v: &[f64]| !v.is_empty() && v.windows(2).all(|w| w[1] > w[0]);
        if !increasing(&psi_values) || psi_values.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::InvalidGrid { axis: "psi" });
        }
        if !increasing(&omega_values) || omega_values.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidGrid { axis: "omega" });
        }
        if n < 1 {
            return Err(Error::TrialCount { n, min: 1 });
        }
        Ok(Self {
            n,
            psi_values,
            omega_values,
        })
    }

    pub fn linear(
        n: usize,
        (psi_lo, psi_hi, psi_steps): (f64, f64, usize),
        (omega_lo, omega_hi, omega_steps): (f64, f64, usize),
    ) -> Result<Self> {
        Self::new(
            n,
            linspace(psi_lo, psi_hi, psi_steps),
            linspace(omega_lo, omega_hi, omega_steps),
        )
    }

    /// 101 x 101 points over `[0.01, 0.99] x [0.05, 2]`.
    pub fn standard(n: usize) -> Result<Self> {
        Self::linear(n, (0.01, 0.99, 101), (0.05, 2.0, 101))
    }

    /// Row-major cell parameters: `psi` outer, `omega` inner.
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.psi_values
            .iter()
            .flat_map(move |&p| self.omega_values.iter().map(move |&w| (p, w)))
    }

    pub fn len(&self) -> usize {
        self.psi_values.len() * self.omega_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridKind {
    /// `value` is `Delta`; `flag` marks defined (non-singular) cells.
    Delta,
    /// `value` is `tau_1`; `flag` marks `tau_1 <= 1`.
    Tau1,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub psi: f64,
    pub omega: f64,
    pub value: Option<f64>,
    pub flag: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionGrid {
    pub kind: GridKind,
    pub spec: GridSpec,
    pub cells: Vec<GridCell>,
}

impl RegionGrid {
    /// Smallest value over cells carrying one.
    pub fn min_value(&self) -> Option<f64> {
        self.cells.iter().filter_map(|c| c.value).reduce(f64::min)
    }
}

fn evaluate_grid(
    spec: &GridSpec,
    cell: impl Fn(ModelParams) -> GridCell + Sync + Send,
) -> Result<Vec<GridCell>> {
    let params: Vec<ModelParams> = spec
        .cells()
        .map(|(p, w)| ModelParams::new(spec.n, p, w))
        .collect::<Result<_>>()?;
    Ok(params.into_par_iter().map(cell).collect())
}

/// `Delta` on every cell, singular cells flagged.
pub fn delta_grid(spec: &GridSpec) -> Result<RegionGrid> {
    let cells = evaluate_grid(spec, |p| {
        let value = delta(&p).value();
        GridCell {
            psi: p.psi(),
            omega: p.omega(),
            value,
            flag: value.is_some(),
        }
    })?;
    Ok(RegionGrid {
        kind: GridKind::Delta,
        spec: spec.clone(),
        cells,
    })
}

/// `tau_1` on every cell with the `tau_1 <= 1` classification (ties within
/// [`TAU1_TIE`] count as `<=`).
pub fn tau1_region_grid(spec: &GridSpec) -> Result<RegionGrid> {
    let cells = evaluate_grid(spec, |p| {
        let t = tau1(&p);
        GridCell {
            psi: p.psi(),
            omega: p.omega(),
            value: Some(t),
            flag: t <= 1.0 + TAU1_TIE,
        }
    })?;
    Ok(RegionGrid {
        kind: GridKind::Tau1,
        spec: spec.clone(),
        cells,
    })
}

fn tau1(params: &ModelParams) -> f64 {
    let (n, psi, omega) = (params.n(), params.psi(), params.omega());
    (log_k_unchecked(n, 1, psi, omega) - log_k_unchecked(n, 0, psi, omega)).exp()
}

/// The region where `tau_1 <= 1`:
/// `{psi <= 1/2, omega <= 1} U {psi >= 1/2, omega >= 1}`.
pub fn predicted_tau1_le_one(psi: f64, omega: f64) -> bool {
    (psi <= 0.5 && omega <= 1.0) || (psi >= 0.5 && omega >= 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ordering {
    /// `psi > pi`
    PsiGreater,
    Equal,
    /// `psi < pi`
    PsiLess,
}

/// How `psi` compares with the marginal `pi = psi tau_1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderingReport {
    pub n: usize,
    pub psi: f64,
    pub omega: f64,
    pub pi: f64,
    pub tau1: f64,
    pub ordering: Ordering,
    /// `1/2 <= psi < 1` and `omega > 1`.
    pub hypothesis: bool,
    /// Under the hypothesis: whether `psi > pi` holds (with `psi = 1/2`
    /// counting as the equality boundary).
    pub holds: Option<bool>,
}

/// Checks `omega > 1 => psi > pi` for `psi >= 1/2`, and reports the ordering
/// for any parameters.
pub fn theorem2_check(params: &ModelParams) -> OrderingReport {
    let (psi, omega) = (params.psi(), params.omega());
    let t = tau1(params);
    let pi = psi * t;
    let exact_tie = params.is_independent() || psi == 0.5 || psi == 1.0 || psi == 0.0;
    let ordering = if exact_tie || (t - 1.0).abs() <= TAU1_TIE {
        Ordering::Equal
    } else if t < 1.0 {
        Ordering::PsiGreater
    } else {
        Ordering::PsiLess
    };
    let hypothesis = (0.5..1.0).contains(&psi) && omega > 1.0;
    let holds = hypothesis.then(|| {
        if psi == 0.5 {
            ordering == Ordering::Equal
        } else {
            ordering == Ordering::PsiGreater
        }
    });
    OrderingReport {
        n: params.n(),
        psi,
        omega,
        pi,
        tau1: t,
        ordering,
        hypothesis,
        holds,
    }
}
