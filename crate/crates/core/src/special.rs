//! Log-domain helpers and the special functions the kernels rely on.

use std::f64::consts::SQRT_2;

/// `log(sum(exp(xs)))`, returning `-inf` for an empty or all `-inf` input.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    let s: f64 = xs.iter().map(|&x| (x - m).exp()).sum();
    m + s.ln()
}

/// `log(exp(a) + exp(b))`.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `exp(a) - exp(b)` evaluated by factoring out the larger exponent, so the
/// relative accuracy is governed by `a - b` rather than by the magnitudes.
pub fn exp_diff(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    if a > b {
        -a.exp() * (b - a).exp_m1()
    } else {
        b.exp() * (a - b).exp_m1()
    }
}

/// `k * ln(x)` with the convention `0 * ln 0 = 0`.
#[inline]
pub fn xlogy(k: f64, x: f64) -> f64 {
    if k == 0.0 {
        0.0
    } else if x == 0.0 {
        f64::NEG_INFINITY
    } else {
        k * x.ln()
    }
}

/// `k * ln(1 - p)` with the convention `0 * ln 0 = 0`.
#[inline]
pub fn xlog1my(k: f64, p: f64) -> f64 {
    if k == 0.0 {
        0.0
    } else if p == 1.0 {
        f64::NEG_INFINITY
    } else {
        k * (-p).ln_1p()
    }
}

/// Largest `n` for which `C(n, k)` is formed exactly in `u128`.
const EXACT_CHOOSE_MAX_N: usize = 120;

/// Natural log of the binomial coefficient `C(n, k)`.
///
/// Exact integer coefficient (one rounding, then `ln`) up to
/// `n = 120`; log-factorial differences beyond.
pub fn ln_choose(n: usize, k: usize) -> f64 {
    debug_assert!(k <= n);
    if k == 0 || k == n {
        return 0.0;
    }
    if n <= EXACT_CHOOSE_MAX_N {
        let k = k.min(n - k);
        let mut c: u128 = 1;
        for i in 0..k {
            c = c * (n - i) as u128 / (i + 1) as u128;
        }
        return (c as f64).ln();
    }
    statrs::function::factorial::ln_binomial(n as u64, k as u64)
}

/// Standard normal cdf through the complementary error function.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / SQRT_2)
}

/// Logistic function, stable for large `|x|`.
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `ln(p / (1 - p))`.
pub fn logit(p: f64) -> f64 {
    p.ln() - (-p).ln_1p()
}
