//! Small statistics helpers for Monte Carlo estimates.

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes.min(trials) as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let margin = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // Guard the exact endpoints against rounding.
    let low = if successes == 0 { 0.0 } else { (center - margin).clamp(0.0, p) };
    let high = if successes >= trials { 1.0 } else { (center + margin).clamp(p, 1.0) };
    (low, high)
}

/// One-sided exact McNemar test on paired binary outcomes.
///
/// `favour` counts pairs where only the first system had the event, `against`
/// pairs where only the second did. Returns `P(X >= favour)` for
/// `X ~ Binomial(favour + against, 1/2)`.
pub fn mcnemar_one_sided(favour: u64, against: u64) -> f64 {
    let n = favour + against;
    if favour == 0 {
        return 1.0;
    }
    // Sum the upper tail in log space.
    let ln_half_n = n as f64 * 0.5f64.ln();
    let mut ln_choose = 0.0f64;
    let mut tail = 0.0;
    for k in 0..=n {
        if k > 0 {
            ln_choose += ((n - k + 1) as f64).ln() - (k as f64).ln();
        }
        if k >= favour {
            tail += (ln_choose + ln_half_n).exp();
        }
    }
    tail.min(1.0)
}

/// Median of a non-empty sample; the mean of the middle pair for even sizes.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[mid] } else { 0.5 * (v[mid - 1] + v[mid]) })
}
