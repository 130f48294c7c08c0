//! Kolmogorov–Smirnov distance between two CDFs on a grid.

use crate::error::{Error, Result};

/// Slack allowed for quadrature noise in "nondecreasing" and "within [0, 1]".
const MONOTONE_SLACK: f64 = 1e-9;

/// sup over `grid` of |F_a(x) − F_b(x)|.
pub fn ks_distance<A, B>(cdf_a: A, cdf_b: B, grid: &[f64]) -> Result<f64>
where
    A: FnMut(f64) -> f64,
    B: FnMut(f64) -> f64,
{
    let a: Vec<f64> = grid.iter().copied().map(cdf_a).collect();
    let b: Vec<f64> = grid.iter().copied().map(cdf_b).collect();
    ks_distance_values(&a, &b, grid)
}

/// KS distance from pre-evaluated CDF values on a common grid.
pub fn ks_distance_values(a: &[f64], b: &[f64], grid: &[f64]) -> Result<f64> {
    if grid.is_empty() || a.len() != grid.len() || b.len() != grid.len() {
        return Err(Error::Validation("KS grid and CDF values must be nonempty and equally long".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Validation("KS grid must be strictly increasing".into()));
    }
    check_cdf(a, "first")?;
    check_cdf(b, "second")?;
    Ok(a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
}

fn check_cdf(values: &[f64], which: &str) -> Result<()> {
    if let Some(v) = values
        .iter()
        .find(|v| !(**v >= -MONOTONE_SLACK && **v <= 1.0 + MONOTONE_SLACK))
    {
        return Err(Error::Validation(format!("{which} CDF leaves [0, 1]: {v}")));
    }
    if let Some(w) = values.windows(2).find(|w| w[1] < w[0] - MONOTONE_SLACK) {
        return Err(Error::Validation(format!(
            "{which} CDF is not nondecreasing: {} then {}",
            w[0], w[1]
        )));
    }
    Ok(())
}
