//! Binomial proportions with Wilson score intervals, and sample means.

use serde::{Deserialize, Serialize};

/// Two-sided 95% standard normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Intervals are only attached when at least this many trials were run.
pub const MIN_TRIALS_FOR_CI: u64 = 100;

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    assert!(
        successes <= trials,
        "{successes} successes out of {trials} trials"
    );
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if successes == 0 {
        0.0
    } else {
        (centre - half).max(0.0)
    };
    let hi = if successes == trials {
        1.0
    } else {
        (centre + half).min(1.0)
    };
    (lo, hi)
}

/// A binomial proportion with its 95% Wilson interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Proportion {
    pub successes: u64,
    pub trials: u64,
    pub estimate: f64,
    /// `None` below [`MIN_TRIALS_FOR_CI`] trials.
    pub ci: Option<(f64, f64)>,
}

impl Proportion {
    pub fn new(successes: u64, trials: u64) -> Self {
        let estimate = if trials == 0 {
            f64::NAN
        } else {
            successes as f64 / trials as f64
        };
        let ci = (trials >= MIN_TRIALS_FOR_CI).then(|| wilson_interval(successes, trials, Z95));
        Proportion {
            successes,
            trials,
            estimate,
            ci,
        }
    }

    pub fn covers(&self, p: f64) -> bool {
        self.ci.is_some_and(|(lo, hi)| lo <= p && p <= hi)
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub count: u64,
}

impl MeanEstimate {
    /// From the sum and sum of squares of `count` observations.
    pub fn from_sums(sum: f64, sum_sq: f64, count: u64) -> Self {
        if count == 0 {
            return MeanEstimate {
                mean: f64::NAN,
                std_error: f64::NAN,
                count,
            };
        }
        let n = count as f64;
        let mean = sum / n;
        let std_error = if count > 1 {
            let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
            (var / n).sqrt()
        } else {
            f64::NAN
        };
        MeanEstimate {
            mean,
            std_error,
            count,
        }
    }

    pub fn from_samples(xs: &[f64]) -> Self {
        let sum: f64 = xs.iter().sum();
        let sum_sq: f64 = xs.iter().map(|x| x * x).sum();
        Self::from_sums(sum, sum_sq, xs.len() as u64)
    }
}
