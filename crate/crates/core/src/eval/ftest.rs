//! Variance-ratio significance test on regression residuals, with the F
//! distribution evaluated through the regularized incomplete beta function.

use crate::error::{IqaError, Result};

pub const DEFAULT_CONFIDENCE: f64 = 0.95;

/// Absolute accuracy of the critical-value bisection.
pub const CRITICAL_VALUE_TOLERANCE: f64 = 1e-10;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for `x > 0` (Lanczos approximation).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Continued fraction for the incomplete beta function (modified Lentz).
fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    let (qab, qap, qam) = (a + b, a + 1.0, a - 1.0);
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=10_000 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Regularized incomplete beta `I_x(a, b)`.
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front =
        ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_continued_fraction(a, b, x) / a
    } else {
        1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b
    }
}

/// CDF of the F distribution with `(d1, d2)` degrees of freedom.
pub fn f_cdf(x: f64, d1: f64, d2: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    regularized_incomplete_beta(d1 / 2.0, d2 / 2.0, d1 * x / (d1 * x + d2))
}

/// Quantile of the F distribution, by bisection on [`f_cdf`].
pub fn f_inverse_cdf(p: f64, d1: f64, d2: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&p) || p == 0.0 {
        return Err(IqaError::InvalidArgument(format!(
            "probability must lie in (0, 1), got {p}"
        )));
    }
    if !(d1 > 0.0 && d2 > 0.0) {
        return Err(IqaError::InvalidArgument(format!(
            "degrees of freedom must be positive, got ({d1}, {d2})"
        )));
    }
    let mut hi = 1.0;
    while f_cdf(hi, d1, d2) < p {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(IqaError::InvalidArgument("F quantile out of range".into()));
        }
    }
    let mut lo = 0.0;
    while hi - lo > CRITICAL_VALUE_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if f_cdf(mid, d1, d2) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Unbiased sample variance.
pub fn sample_variance(x: &[f64]) -> f64 {
    let m = x.iter().sum::<f64>() / x.len() as f64;
    x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (x.len() - 1) as f64
}

/// Critical value of the variance ratio for `n` residuals per method.
pub fn critical_value(n: usize, confidence: f64) -> Result<f64> {
    let dof = (n - 1) as f64;
    f_inverse_cdf(confidence, dof, dof)
}

/// `+1` when method A's residual variance is significantly smaller than B's,
/// `-1` when significantly larger, `0` otherwise.
pub fn f_test(residuals_a: &[f64], residuals_b: &[f64], confidence: f64) -> Result<i8> {
    if residuals_a.len() != residuals_b.len() {
        return Err(IqaError::LengthMismatch(
            residuals_a.len(),
            residuals_b.len(),
        ));
    }
    if residuals_a.len() < 3 {
        return Err(IqaError::DegenerateSeries(format!(
            "F-test needs at least 3 residuals, got {}",
            residuals_a.len()
        )));
    }
    let (va, vb) = (sample_variance(residuals_a), sample_variance(residuals_b));
    let (small, large) = if va <= vb { (va, vb) } else { (vb, va) };
    if large == 0.0 || va == vb {
        return Ok(0);
    }
    let ratio = large / small;
    let critical = critical_value(residuals_a.len(), confidence)?;
    if ratio > critical {
        Ok(if va < vb { 1 } else { -1 })
    } else {
        Ok(0)
    }
}
