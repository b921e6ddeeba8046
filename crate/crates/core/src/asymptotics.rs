//! Limit laws as the association parameter runs to its edges.
//!
//! As `omega -> 0` every normalizing sum is dominated by the terms whose
//! interaction exponent vanishes, and as `omega -> inf` by the terms whose
//! exponent is maximal. The ratio of the dominant coefficient sums gives the
//! limit of each `tau_j`, and the dominant support points give the weak
//! limit of `Y`:
//!
//! | regime              | limit law                                             |
//! |---------------------|-------------------------------------------------------|
//! | `omega -> 0`        | `{0: (1-psi)^n / s, n: psi^n / s}`, `s = psi^n + (1-psi)^n` |
//! | `omega -> inf`, even n | point mass at `n / 2`                              |
//! | `omega -> inf`, odd n  | `{(n-1)/2: 1 - psi, (n+1)/2: psi}`                 |
//!
//! Letting `psi` run to 0 or 1 afterwards collapses each law to a point mass.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mbd::{pmf, ModelParams};
use crate::special::{ln_choose, log_add_exp, log_sum_exp, sigmoid};
use crate::tolerance::TV_NOISE_FLOOR;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OmegaEdge {
    ToZero,
    ToInfinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PsiEdge {
    /// `psi` held fixed in `(0, 1)`.
    None,
    ToZero,
    ToOne,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitRegime {
    pub omega_edge: OmegaEdge,
    pub psi_edge: PsiEdge,
    pub n: usize,
}

impl LimitRegime {
    pub fn new(omega_edge: OmegaEdge, psi_edge: PsiEdge, n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::TrialCount { n, min: 1 });
        }
        Ok(Self {
            omega_edge,
            psi_edge,
            n,
        })
    }

    pub fn parity(&self) -> Parity {
        if self.n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Whether the limit law is a single point mass.
    pub fn is_dirac(&self) -> bool {
        self.psi_edge != PsiEdge::None
            || (self.omega_edge == OmegaEdge::ToInfinity && self.parity() == Parity::Even)
    }

    /// Checks `psi` against the regime: interior for a fixed-`psi` regime,
    /// exactly the edge value otherwise.
    fn check_psi(&self, psi: f64) -> Result<()> {
        let ok = match self.psi_edge {
            PsiEdge::None => psi > 0.0 && psi < 1.0,
            PsiEdge::ToZero => psi == 0.0,
            PsiEdge::ToOne => psi == 1.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::RegimeMismatch(format!(
                "psi = {psi} is inconsistent with psi edge {:?}",
                self.psi_edge
            )))
        }
    }
}

/// A finitely supported law, as `(support point, mass)` pairs in increasing
/// support order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitLaw {
    pub masses: Vec<(usize, f64)>,
}

impl LimitLaw {
    fn point(at: usize) -> Self {
        Self {
            masses: vec![(at, 1.0)],
        }
    }

    fn two_point(lo: usize, p_lo: f64, hi: usize, p_hi: f64) -> Self {
        let masses = [(lo, p_lo), (hi, p_hi)]
            .into_iter()
            .filter(|&(_, p)| p > 0.0)
            .collect();
        Self { masses }
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().map(|&(_, p)| p).sum()
    }

    pub fn mean(&self) -> f64 {
        self.masses.iter().map(|&(y, p)| y as f64 * p).sum()
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.masses
            .iter()
            .map(|&(y, p)| (y as f64 - m).powi(2) * p)
            .sum()
    }

    /// Dense probability vector over `{0, ..., n}`.
    pub fn dense(&self, n: usize) -> Vec<f64> {
        let mut v = vec![0.0; n + 1];
        for &(y, p) in &self.masses {
            v[y] += p;
        }
        v
    }
}

/// One probe of a convergence sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergencePoint {
    /// The varied parameter (omega or psi).
    pub probe: f64,
    pub total_variation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitReport {
    pub regime: LimitRegime,
    /// Parameter held fixed along the probes (psi for omega probes, omega for
    /// psi probes).
    pub fixed: f64,
    pub limit_mean: f64,
    pub limit_variance: f64,
    pub limit_distribution: LimitLaw,
    pub numeric_evidence: Vec<ConvergencePoint>,
    /// `d ln TV / d ln probe` between consecutive probes; informational only.
    pub empirical_slopes: Vec<f64>,
}

impl LimitReport {
    pub fn final_distance(&self) -> f64 {
        self.numeric_evidence
            .last()
            .map_or(f64::NAN, |p| p.total_variation)
    }

    /// Non-increasing up to [`TV_NOISE_FLOOR`].
    pub fn is_monotone(&self) -> bool {
        self.numeric_evidence
            .windows(2)
            .all(|w| w[1].total_variation <= w[0].total_variation + TV_NOISE_FLOOR)
    }
}

fn check_psi_interior(op: &'static str, psi: f64) -> Result<()> {
    if psi > 0.0 && psi < 1.0 {
        Ok(())
    } else {
        Err(Error::DegeneratePsi { op, psi })
    }
}

fn check_j(j: usize, hi: usize) -> Result<()> {
    if j < 1 || j > hi {
        return Err(Error::IndexOutOfRange {
            index: j,
            lo: 1,
            hi,
        });
    }
    Ok(())
}

/// `lim_{omega -> 0} tau_j = psi^(n-j) / (psi^n + (1-psi)^n)`.
pub fn tau_limit_omega_zero(j: usize, n: usize, psi: f64) -> Result<f64> {
    check_psi_interior("tau_limit_omega_zero", psi)?;
    check_j(j, n)?;
    let (lp, lq) = (psi.ln(), (-psi).ln_1p());
    let nf = n as f64;
    Ok(((n - j) as f64 * lp - log_add_exp(nf * lp, nf * lq)).exp())
}

/// `lim_{omega -> inf} tau_j = C(n-j, n/2 - j) / (psi^j C(n, n/2))` for even `n`
/// and `j <= n/2`.
pub fn tau_limit_omega_inf_even(j: usize, n: usize, psi: f64) -> Result<f64> {
    check_psi_interior("tau_limit_omega_inf_even", psi)?;
    if !n.is_multiple_of(2) {
        return Err(Error::RegimeMismatch(format!(
            "n = {n} is odd; the even-n limit does not apply"
        )));
    }
    check_j(j, n / 2)?;
    let h = n / 2;
    Ok((ln_choose(n - j, h - j) - ln_choose(n, h) - j as f64 * psi.ln()).exp())
}

/// `lim_{omega -> inf} tau_j` for odd `n` and `j <= (n-1)/2`, from the
/// dominant terms of `K_{n-j}` and `K_n`.
///
/// Reduces to `((n-1)/2 + psi) / (n psi)` at `j = 1` and
/// `((n-3)/4 + psi) / (n psi^2)` at `j = 2`.
pub fn tau_limit_omega_inf_odd(j: usize, n: usize, psi: f64) -> Result<f64> {
    check_psi_interior("tau_limit_omega_inf_odd", psi)?;
    if n.is_multiple_of(2) {
        return Err(Error::RegimeMismatch(format!(
            "n = {n} is even; the odd-n limit does not apply"
        )));
    }
    check_j(j, (n - 1) / 2)?;
    dominant_tau_limit(j, n, psi, OmegaEdge::ToInfinity)
}

/// Coefficient log-sum and exponent of the dominant terms of `K_{n-a}`.
fn dominant_terms(n: usize, a: usize, psi: f64, edge: OmegaEdge) -> (u64, f64) {
    let m = n - a;
    let exponent = |i: usize| ((m - i) * (i + a)) as u64;
    let extreme = match edge {
        OmegaEdge::ToZero => (0..=m).map(exponent).min(),
        OmegaEdge::ToInfinity => (0..=m).map(exponent).max(),
    }
    .unwrap_or(0);
    let (lp, lq) = (psi.ln(), (-psi).ln_1p());
    let coefs: Vec<f64> = (0..=m)
        .filter(|&i| exponent(i) == extreme)
        .map(|i| ln_choose(m, i) + i as f64 * lp + (m - i) as f64 * lq)
        .collect();
    (extreme, log_sum_exp(&coefs))
}

/// Limit of `tau_j` as `omega` runs to `edge`, computed by keeping only the
/// terms of extreme `omega`-exponent in numerator and denominator.
///
/// Returns 0 (or infinity) when the numerator's extreme exponent is
/// dominated by (or dominates) the denominator's.
pub fn dominant_tau_limit(j: usize, n: usize, psi: f64, edge: OmegaEdge) -> Result<f64> {
    check_psi_interior("dominant_tau_limit", psi)?;
    check_j(j, n)?;
    let (num_exp, num) = dominant_terms(n, j, psi, edge);
    let (den_exp, den) = dominant_terms(n, 0, psi, edge);
    let sign = match edge {
        OmegaEdge::ToZero => den_exp.cmp(&num_exp),
        OmegaEdge::ToInfinity => num_exp.cmp(&den_exp),
    };
    Ok(match sign {
        std::cmp::Ordering::Equal => (num - den).exp(),
        std::cmp::Ordering::Less => 0.0,
        std::cmp::Ordering::Greater => f64::INFINITY,
    })
}

/// Weak limit of `Y` in the given regime.
pub fn limit_distribution(regime: &LimitRegime, psi: f64) -> Result<LimitLaw> {
    regime.check_psi(psi)?;
    let n = regime.n;
    Ok(match (regime.omega_edge, regime.parity()) {
        (OmegaEdge::ToZero, _) => match regime.psi_edge {
            PsiEdge::ToZero => LimitLaw::point(0),
            PsiEdge::ToOne => LimitLaw::point(n),
            PsiEdge::None => {
                // psi^n / (psi^n + (1-psi)^n) as a logistic in n * logit(psi)
                let x = n as f64 * (psi.ln() - (-psi).ln_1p());
                LimitLaw::two_point(0, sigmoid(-x), n, sigmoid(x))
            }
        },
        (OmegaEdge::ToInfinity, Parity::Even) => LimitLaw::point(n / 2),
        (OmegaEdge::ToInfinity, Parity::Odd) => {
            let lo = (n - 1) / 2;
            match regime.psi_edge {
                PsiEdge::ToZero => LimitLaw::point(lo),
                PsiEdge::ToOne => LimitLaw::point(lo + 1),
                PsiEdge::None => LimitLaw::two_point(lo, 1.0 - psi, lo + 1, psi),
            }
        }
    })
}

/// Closed-form limiting `(mean, variance)`.
pub fn limit_moments(regime: &LimitRegime, psi: f64) -> Result<(f64, f64)> {
    regime.check_psi(psi)?;
    let n = regime.n as f64;
    Ok(
        match (regime.omega_edge, regime.parity(), regime.psi_edge) {
            (OmegaEdge::ToZero, _, PsiEdge::ToZero) => (0.0, 0.0),
            (OmegaEdge::ToZero, _, PsiEdge::ToOne) => (n, 0.0),
            (OmegaEdge::ToZero, _, PsiEdge::None) => {
                let share = sigmoid(n * (psi.ln() - (-psi).ln_1p()));
                (n * share, n * n * share - n * n * share * share)
            }
            (OmegaEdge::ToInfinity, Parity::Even, _) => (n / 2.0, 0.0),
            (OmegaEdge::ToInfinity, Parity::Odd, PsiEdge::ToZero) => ((n - 1.0) / 2.0, 0.0),
            (OmegaEdge::ToInfinity, Parity::Odd, PsiEdge::ToOne) => ((n + 1.0) / 2.0, 0.0),
            (OmegaEdge::ToInfinity, Parity::Odd, PsiEdge::None) => {
                ((n - 1.0) / 2.0 + psi, psi * (1.0 - psi))
            }
        },
    )
}

/// Total-variation distance `0.5 * sum |p - q|`.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    debug_assert_eq!(p.len(), q.len());
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// `10^-1, ..., 10^-8` toward zero or `10^1, ..., 10^8` toward infinity.
pub fn geometric_probes(edge: OmegaEdge) -> Vec<f64> {
    (1..=8)
        .map(|k| match edge {
            OmegaEdge::ToZero => 10f64.powi(-k),
            OmegaEdge::ToInfinity => 10f64.powi(k),
        })
        .collect()
}

fn check_probes(probes: &[f64], toward_zero: bool, what: &str) -> Result<()> {
    if probes.is_empty() {
        return Err(Error::NonMonotoneProbes(format!("no {what} probes given")));
    }
    let ok = probes.windows(2).all(|w| {
        if toward_zero {
            w[1] < w[0]
        } else {
            w[1] > w[0]
        }
    });
    if !ok {
        let dir = if toward_zero {
            "decreasing"
        } else {
            "increasing"
        };
        return Err(Error::NonMonotoneProbes(format!(
            "{what} probes must be strictly {dir}"
        )));
    }
    Ok(())
}

fn slopes(evidence: &[ConvergencePoint], transform: impl Fn(f64) -> f64) -> Vec<f64> {
    evidence
        .windows(2)
        .filter(|w| w[0].total_variation > 0.0 && w[1].total_variation > 0.0)
        .map(|w| {
            (w[1].total_variation.ln() - w[0].total_variation.ln())
                / (transform(w[1].probe).ln() - transform(w[0].probe).ln())
        })
        .collect()
}

/// Total-variation distance between the exact pmf at each omega probe and the
/// limit law for fixed interior `psi`.
pub fn convergence_report(
    regime: &LimitRegime,
    psi: f64,
    omega_probes: &[f64],
) -> Result<LimitReport> {
    if regime.psi_edge != PsiEdge::None {
        return Err(Error::RegimeMismatch(
            "omega probes need a fixed psi; use dirac_convergence_report for psi edges".into(),
        ));
    }
    regime.check_psi(psi)?;
    let toward_zero = regime.omega_edge == OmegaEdge::ToZero;
    check_probes(omega_probes, toward_zero, "omega")?;
    for &w in omega_probes {
        ModelParams::new(regime.n, psi, w)?;
    }
    let law = limit_distribution(regime, psi)?;
    let target = law.dense(regime.n);
    let numeric_evidence: Vec<ConvergencePoint> = omega_probes
        .par_iter()
        .map(|&omega| {
            let params = ModelParams::new(regime.n, psi, omega).expect("validated above");
            ConvergencePoint {
                probe: omega,
                total_variation: total_variation(&pmf(&params).probs(), &target),
            }
        })
        .collect();
    let (limit_mean, limit_variance) = limit_moments(regime, psi)?;
    let empirical_slopes = slopes(&numeric_evidence, |w| w);
    Ok(LimitReport {
        regime: *regime,
        fixed: psi,
        limit_mean,
        limit_variance,
        limit_distribution: law,
        numeric_evidence,
        empirical_slopes,
    })
}

/// Total-variation distance to the point-mass limit of a `psi`-edge regime,
/// holding `omega` at a value on the regime's side of 1 while `psi` runs to
/// the edge.
pub fn dirac_convergence_report(
    regime: &LimitRegime,
    omega: f64,
    psi_probes: &[f64],
) -> Result<LimitReport> {
    let edge_psi = match regime.psi_edge {
        PsiEdge::None => {
            return Err(Error::RegimeMismatch(
                "psi probes need a psi edge; use convergence_report".into(),
            ))
        }
        PsiEdge::ToZero => 0.0,
        PsiEdge::ToOne => 1.0,
    };
    let side_ok = match regime.omega_edge {
        OmegaEdge::ToZero => omega < 1.0,
        OmegaEdge::ToInfinity => omega > 1.0,
    };
    if !side_ok {
        return Err(Error::RegimeMismatch(format!(
            "omega = {omega} is on the wrong side of 1 for {:?}",
            regime.omega_edge
        )));
    }
    let distance = |p: f64| (p - edge_psi).abs();
    let distances: Vec<f64> = psi_probes.iter().map(|&p| distance(p)).collect();
    check_probes(&distances, true, "psi-distance")?;
    for &p in psi_probes {
        let params = ModelParams::new(regime.n, p, omega)?;
        if !params.has_interior_psi() {
            return Err(Error::DegeneratePsi {
                op: "dirac_convergence_report",
                psi: p,
            });
        }
    }
    let law = limit_distribution(regime, edge_psi)?;
    let target = law.dense(regime.n);
    let numeric_evidence: Vec<ConvergencePoint> = psi_probes
        .par_iter()
        .map(|&p| {
            let params = ModelParams::new(regime.n, p, omega).expect("validated above");
            ConvergencePoint {
                probe: p,
                total_variation: total_variation(&pmf(&params).probs(), &target),
            }
        })
        .collect();
    let (limit_mean, limit_variance) = limit_moments(regime, edge_psi)?;
    let empirical_slopes = slopes(&numeric_evidence, distance);
    Ok(LimitReport {
        regime: *regime,
        fixed: omega,
        limit_mean,
        limit_variance,
        limit_distribution: law,
        numeric_evidence,
        empirical_slopes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mbd::tau;

    fn regime(edge: OmegaEdge, psi_edge: PsiEdge, n: usize) -> LimitRegime {
        LimitRegime::new(edge, psi_edge, n).unwrap()
    }

    #[test]
    fn omega_zero_tau_limit_values() {
        // 0.5^3 / (0.5^4 + 0.5^4) = 1
        assert!((tau_limit_omega_zero(1, 4, 0.5).unwrap() - 1.0).abs() < 1e-15);
        for psi in [0.1, 0.5, 0.8] {
            let v = tau_limit_omega_zero(6, 6, psi).unwrap();
            assert!((v - 1.0 / (psi.powi(6) + (1.0 - psi).powi(6))).abs() < 1e-12 * v);
            assert!(v >= 1.0);
        }
        assert!(tau_limit_omega_zero(1, 4, 0.0).is_err());
        assert!(tau_limit_omega_zero(5, 4, 0.5).is_err());
    }

    #[test]
    fn omega_inf_even_values() {
        assert!((tau_limit_omega_inf_even(1, 4, 0.5).unwrap() - 1.0).abs() < 1e-15);
        let v = tau_limit_omega_inf_even(2, 4, 0.5).unwrap();
        assert!((v - 4.0 / 6.0).abs() < 1e-15);
        // (n - 2) / (4 (n - 1) psi^2)
        assert!((v - 2.0 / (12.0 * 0.25)).abs() < 1e-15);
        assert!(tau_limit_omega_inf_even(3, 4, 0.5).is_err());
        assert!(tau_limit_omega_inf_even(1, 5, 0.5).is_err());
    }

    #[test]
    fn omega_inf_odd_values() {
        assert!((tau_limit_omega_inf_odd(1, 5, 0.3).unwrap() - 23.0 / 15.0).abs() < 1e-14);
        assert!((tau_limit_omega_inf_odd(2, 5, 0.5).unwrap() - 0.8).abs() < 1e-14);
        for n in [3usize, 7, 9, 13] {
            for psi in [0.15, 0.5, 0.85] {
                let nf = n as f64;
                let t1 = tau_limit_omega_inf_odd(1, n, psi).unwrap();
                assert!((t1 - ((nf - 1.0) / 2.0 + psi) / (nf * psi)).abs() < 1e-12 * t1);
                if n >= 5 {
                    let t2 = tau_limit_omega_inf_odd(2, n, psi).unwrap();
                    let e = ((nf - 3.0) / 4.0 + psi) / (nf * psi * psi);
                    assert!((t2 - e).abs() < 1e-12 * e);
                }
            }
        }
        assert!(tau_limit_omega_inf_odd(1, 4, 0.5).is_err());
        assert!(tau_limit_omega_inf_odd(3, 5, 0.5).is_err());
    }

    #[test]
    fn closed_forms_agree_with_dominant_extraction() {
        for n in 1..=12usize {
            for psi in [0.2, 0.5, 0.7] {
                for j in 1..=n {
                    let a = tau_limit_omega_zero(j, n, psi).unwrap();
                    let b = dominant_tau_limit(j, n, psi, OmegaEdge::ToZero).unwrap();
                    assert!((a - b).abs() < 1e-12 * a);
                }
                if n % 2 == 0 {
                    for j in 1..=n / 2 {
                        let a = tau_limit_omega_inf_even(j, n, psi).unwrap();
                        let b = dominant_tau_limit(j, n, psi, OmegaEdge::ToInfinity).unwrap();
                        assert!((a - b).abs() < 1e-12 * a);
                    }
                }
            }
        }
        // beyond n/2 the numerator is dominated
        assert_eq!(
            dominant_tau_limit(3, 4, 0.5, OmegaEdge::ToInfinity).unwrap(),
            0.0
        );
    }

    #[test]
    fn exact_tau_approaches_limits() {
        let p = ModelParams::new(4, 0.5, 1e-8).unwrap();
        let t = tau(1, &p).unwrap();
        assert!((t - 1.0).abs() < 1e-4);
        let p = ModelParams::new(6, 0.35, 1e6).unwrap();
        for j in 1..=3 {
            let l = tau_limit_omega_inf_even(j, 6, 0.35).unwrap();
            assert!((tau(j, &p).unwrap() - l).abs() < 1e-3 * l);
        }
    }

    #[test]
    fn limit_moments_examples() {
        let (m, v) = limit_moments(&regime(OmegaEdge::ToZero, PsiEdge::None, 3), 0.5).unwrap();
        assert!((m - 1.5).abs() < 1e-15 && (v - 2.25).abs() < 1e-14);
        let (m, v) = limit_moments(&regime(OmegaEdge::ToInfinity, PsiEdge::None, 4), 0.23).unwrap();
        assert_eq!((m, v), (2.0, 0.0));
        let (m, v) =
            limit_moments(&regime(OmegaEdge::ToInfinity, PsiEdge::ToZero, 5), 0.0).unwrap();
        assert_eq!((m, v), (2.0, 0.0));
        let (m, v) = limit_moments(&regime(OmegaEdge::ToInfinity, PsiEdge::ToOne, 5), 1.0).unwrap();
        assert_eq!((m, v), (3.0, 0.0));
        assert!(limit_moments(&regime(OmegaEdge::ToZero, PsiEdge::None, 3), 1.0).is_err());
        assert!(limit_moments(&regime(OmegaEdge::ToZero, PsiEdge::ToOne, 3), 0.4).is_err());
    }

    #[test]
    fn limit_laws() {
        let law = limit_distribution(&regime(OmegaEdge::ToZero, PsiEdge::ToOne, 7), 1.0).unwrap();
        assert_eq!(law.masses, vec![(7, 1.0)]);
        let law = limit_distribution(&regime(OmegaEdge::ToZero, PsiEdge::ToZero, 7), 0.0).unwrap();
        assert_eq!(law.masses, vec![(0, 1.0)]);
        let law =
            limit_distribution(&regime(OmegaEdge::ToInfinity, PsiEdge::None, 5), 0.3).unwrap();
        assert_eq!(law.masses, vec![(2, 0.7), (3, 0.3)]);
        assert!((law.mean() - 2.3).abs() < 1e-15);
        assert!((law.variance() - 0.21).abs() < 1e-15);
        let law =
            limit_distribution(&regime(OmegaEdge::ToInfinity, PsiEdge::None, 6), 0.4).unwrap();
        assert_eq!(law.masses, vec![(3, 1.0)]);
        // Off-centre mass is (C(6,2)/C(6,3)) ((1-psi)/psi + psi/(1-psi)) / omega
        // to leading order: 1.625e-6 at omega = 1e6, so the 1e-6 bound needs 1e7.
        let exact = pmf(&ModelParams::new(6, 0.4, 1e6).unwrap());
        let off = 1.0 - exact.prob(3).unwrap();
        assert!((off - 1.625e-6).abs() < 1e-3 * 1.625e-6, "{off}");
        let exact = pmf(&ModelParams::new(6, 0.4, 1e7).unwrap());
        assert!(exact.prob(3).unwrap() >= 1.0 - 1e-6);
    }

    #[test]
    fn laws_match_moments() {
        for n in 1..=15 {
            for psi in [0.1, 0.5, 0.9] {
                for edge in [OmegaEdge::ToZero, OmegaEdge::ToInfinity] {
                    let r = regime(edge, PsiEdge::None, n);
                    let law = limit_distribution(&r, psi).unwrap();
                    let (m, v) = limit_moments(&r, psi).unwrap();
                    assert!((law.total_mass() - 1.0).abs() < 1e-12);
                    assert!((law.mean() - m).abs() < 1e-12 * m.max(1.0));
                    assert!((law.variance() - v).abs() < 1e-12 * (n * n) as f64);
                }
            }
        }
    }

    #[test]
    fn convergence_reports() {
        let r = regime(OmegaEdge::ToZero, PsiEdge::None, 4);
        let rep = convergence_report(&r, 0.5, &geometric_probes(OmegaEdge::ToZero)).unwrap();
        assert!(rep.is_monotone());
        assert!(rep.final_distance() < 1e-6);

        let r = regime(OmegaEdge::ToInfinity, PsiEdge::None, 7);
        let rep = convergence_report(&r, 0.2, &geometric_probes(OmegaEdge::ToInfinity)).unwrap();
        assert_eq!(rep.limit_distribution.masses, vec![(3, 0.8), (4, 0.2)]);
        assert!(rep.is_monotone());
        assert!(rep.final_distance() < 1e-6);

        let r = regime(OmegaEdge::ToInfinity, PsiEdge::None, 2);
        let rep = convergence_report(&r, 0.5, &geometric_probes(OmegaEdge::ToInfinity)).unwrap();
        for pt in &rep.numeric_evidence {
            // pmf(0) + pmf(2) = 1 / (1 + omega)
            let e = 1.0 / (1.0 + pt.probe);
            assert!((pt.total_variation - e).abs() < 1e-12 * e + 1e-15);
        }
        // TV ~ 1/omega: slopes near -1
        assert!(rep.empirical_slopes.iter().all(|s| (s + 1.0).abs() < 0.1));
    }

    #[test]
    fn probe_validation() {
        let r = regime(OmegaEdge::ToZero, PsiEdge::None, 4);
        assert!(matches!(
            convergence_report(&r, 0.5, &[0.1, 0.2]),
            Err(Error::NonMonotoneProbes(_))
        ));
        assert!(convergence_report(&r, 0.5, &[]).is_err());
        let d = regime(OmegaEdge::ToZero, PsiEdge::ToZero, 4);
        assert!(convergence_report(&d, 0.0, &[0.1]).is_err());
        assert!(dirac_convergence_report(&d, 2.0, &[0.1, 0.01]).is_err());
        assert!(dirac_convergence_report(&d, 1e-8, &[0.01, 0.1]).is_err());
    }

    #[test]
    fn dirac_reports() {
        let probes = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5];
        let r = regime(OmegaEdge::ToInfinity, PsiEdge::ToZero, 5);
        let rep = dirac_convergence_report(&r, 1e8, &probes).unwrap();
        assert_eq!(rep.limit_distribution.masses, vec![(2, 1.0)]);
        assert!(rep.is_monotone());
        assert!(rep.final_distance() < 1e-4);

        let ones: Vec<f64> = probes.iter().map(|p| 1.0 - p).collect();
        let r = regime(OmegaEdge::ToZero, PsiEdge::ToOne, 6);
        let rep = dirac_convergence_report(&r, 1e-8, &ones).unwrap();
        assert_eq!(rep.limit_distribution.masses, vec![(6, 1.0)]);
        assert!(rep.is_monotone());
        assert!(rep.final_distance() < 1e-12);
    }
}
