//! Sorted Monte-Carlo samples with CDF evaluation and normal-approximation
//! confidence intervals.

use crate::error::{Error, Result};
use crate::numerics::special::erfc_inv;

/// z-value of a two-sided normal interval at the given level.
pub fn normal_quantile(level: f64) -> Result<f64> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Domain(format!("confidence level must lie in (0, 1), got {level}")));
    }
    Ok(std::f64::consts::SQRT_2 * erfc_inv(1.0 - level)?)
}

/// Mean and standard error of a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n: usize,
}

impl MeanEstimate {
    pub fn from_samples<I: IntoIterator<Item = f64>>(values: I) -> Self {
        // Welford, in input order, so the result is reproducible bit for bit
        let mut n = 0usize;
        let mut mean = 0.0;
        let mut m2 = 0.0;
        for x in values {
            n += 1;
            let d = x - mean;
            mean += d / n as f64;
            m2 += d * (x - mean);
        }
        let var = if n > 1 { m2 / (n - 1) as f64 } else { 0.0 };
        Self {
            mean,
            std_error: (var / n.max(1) as f64).sqrt(),
            n,
        }
    }

    /// Whether `value` lies inside the two-sided interval at `level`.
    pub fn covers(&self, value: f64, level: f64) -> Result<bool> {
        Ok((self.mean - value).abs() <= normal_quantile(level)? * self.std_error)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    sorted: Vec<f64>,
}

impl EmpiricalDistribution {
    pub fn new(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Validation("empirical distribution needs at least one sample".into()));
        }
        if samples.iter().any(|x| x.is_nan()) {
            return Err(Error::Validation("NaN in Monte-Carlo samples".into()));
        }
        samples.sort_by(f64::total_cmp);
        Ok(Self { sorted: samples })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn sorted_samples(&self) -> &[f64] {
        &self.sorted
    }

    /// Fraction of samples ≤ x.
    pub fn cdf(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&s| s <= x) as f64 / self.sorted.len() as f64
    }

    /// Fraction of samples < x (the estimate of P{X < x}).
    pub fn cdf_strict(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&s| s < x) as f64 / self.sorted.len() as f64
    }

    /// Normal-approximation interval for P{X ≤ x}, clipped to [0, 1].
    pub fn ci(&self, x: f64, level: f64) -> Result<(f64, f64)> {
        let p = self.cdf(x);
        let half = normal_quantile(level)? * (p * (1.0 - p) / self.len() as f64).sqrt();
        Ok(((p - half).max(0.0), (p + half).min(1.0)))
    }

    pub fn mean_of<F: Fn(f64) -> f64>(&self, f: F) -> MeanEstimate {
        MeanEstimate::from_samples(self.sorted.iter().map(|&x| f(x)))
    }

    pub fn mean(&self) -> MeanEstimate {
        self.mean_of(|x| x)
    }

    /// sup_x |F_n(x) − F(x)|, evaluated on both sides of every jump.
    pub fn ks_against<F: Fn(f64) -> f64>(&self, cdf: F) -> f64 {
        let n = self.len() as f64;
        self.sorted
            .iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = cdf(x);
                (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
            })
            .fold(0.0, f64::max)
    }
}
