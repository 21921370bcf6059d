//! Discrete power-law degree sampling on a bounded integer support.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use crate::error::{param, Result};

/// Distribution with `P(d) ∝ d^(-gamma)` for integer `d` in `[k_min, k_max]`.
#[derive(Debug, Clone)]
pub struct TruncatedPowerLaw {
    k_min: u32,
    k_max: u32,
    index: WeightedIndex<f64>,
    mean: f64,
}

impl TruncatedPowerLaw {
    pub fn new(gamma: f64, k_min: u32, k_max: u32) -> Result<Self> {
        if !(gamma > 1.0) || !gamma.is_finite() {
            return Err(param(format!("power-law exponent must exceed 1, got {gamma}")));
        }
        if k_min < 1 || k_min > k_max {
            return Err(param(format!("invalid support [{k_min}, {k_max}]")));
        }
        let masses: Vec<f64> = (k_min..=k_max).map(|d| (d as f64).powf(-gamma)).collect();
        let total: f64 = masses.iter().sum();
        let mean = (k_min..=k_max)
            .zip(&masses)
            .map(|(d, m)| d as f64 * m)
            .sum::<f64>()
            / total;
        let index = WeightedIndex::new(&masses).map_err(|e| param(e.to_string()))?;
        Ok(Self {
            k_min,
            k_max,
            index,
            mean,
        })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn support(&self) -> (u32, u32) {
        (self.k_min, self.k_max)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        self.k_min + self.index.sample(rng) as u32
    }
}

/// Draws `n` degrees from the truncated power law on `[k_min, k_max]`.
pub fn sample_truncated_powerlaw<R: Rng + ?Sized>(
    gamma: f64,
    k_min: u32,
    k_max: u32,
    n: usize,
    rng: &mut R,
) -> Result<Vec<u32>> {
    let dist = TruncatedPowerLaw::new(gamma, k_min, k_max)?;
    Ok((0..n).map(|_| dist.sample(rng)).collect())
}

/// Power law with fixed exponent whose expected value hits a target mean.
///
/// The lower cutoff `k_min` is the smallest one whose mean reaches the target;
/// each draw then comes from the law with cutoff `k_min` with probability `w`,
/// and otherwise from the law with cutoff `k_min - 1` (a point mass at 1 when
/// `k_min == 1`). `w` makes the mixture mean equal the target exactly.
#[derive(Debug, Clone)]
pub struct TunedPowerLaw {
    upper: TruncatedPowerLaw,
    lower: Option<TruncatedPowerLaw>,
    upper_weight: f64,
}

impl TunedPowerLaw {
    pub fn new(gamma: f64, target_mean: f64, k_max: u32) -> Result<Self> {
        if !(target_mean >= 1.0) || target_mean > k_max as f64 {
            return Err(param(format!(
                "target mean {target_mean} outside [1, {k_max}]"
            )));
        }
        let mut lower_mean = 1.0;
        let mut lower: Option<TruncatedPowerLaw> = None;
        for k_min in 1..=k_max {
            let upper = TruncatedPowerLaw::new(gamma, k_min, k_max)?;
            if upper.mean() >= target_mean {
                let span = upper.mean() - lower_mean;
                let upper_weight = if span > 0.0 {
                    ((target_mean - lower_mean) / span).clamp(0.0, 1.0)
                } else {
                    1.0
                };
                return Ok(Self {
                    upper,
                    lower,
                    upper_weight,
                });
            }
            lower_mean = upper.mean();
            lower = Some(upper);
        }
        unreachable!("the law with k_min = k_max has mean k_max >= target")
    }

    /// Expected value of one draw.
    pub fn mean(&self) -> f64 {
        let lower_mean = self.lower.as_ref().map_or(1.0, |d| d.mean());
        self.upper_weight * self.upper.mean() + (1.0 - self.upper_weight) * lower_mean
    }

    pub fn k_min(&self) -> u32 {
        self.upper.k_min
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        if rng.random::<f64>() < self.upper_weight {
            self.upper.sample(rng)
        } else {
            self.lower.as_ref().map_or(1, |d| d.sample(rng))
        }
    }
}
