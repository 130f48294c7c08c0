//! Gil-Pelaez inversion of characteristic functions of real random variables.
//!
//! Density: f(x) = (1/π) ∫₀^∞ Re[e^{−iωx} φ(ω)] dω.
//! CDF:     F(x) = ½ − (1/π) ∫₀^∞ Im[e^{−iωx} φ(ω)] / ω dω.
//!
//! The ω-range is cut where |φ| has fallen below 1e-14 and stays there, and
//! the remaining interval is split into half-periods of the oscillating
//! kernel so each panel sees at most one sign change.

use num_complex::Complex64;

use super::quadrature::{adaptive, QuadratureSpec};
use crate::error::{Error, Result};

const CF_FLOOR: f64 = 1e-14;
const MAX_PANELS: usize = 200_000;

/// Natural frequency scale and truncation point of a CF.
struct Support {
    scale: f64,
    cutoff: f64,
}

fn support<F: Fn(f64) -> Complex64>(cf: &F) -> Result<Support> {
    let mag = |w: f64| cf(w).norm();
    let mut w = 1.0;
    let mut guard = 0;
    while mag(w) < 0.5 {
        w *= 0.5;
        guard += 1;
        if guard > 2000 {
            return Err(Error::Validation("characteristic function vanishes near the origin".into()));
        }
    }
    while mag(2.0 * w) >= 0.5 {
        w *= 2.0;
        guard += 1;
        if guard > 4000 {
            return Err(Error::Accuracy {
                context: "CF does not decay (atom at the origin?)".into(),
                estimate: f64::NAN,
                error_bound: f64::INFINITY,
            });
        }
    }
    let scale = w;
    let mut cutoff = scale;
    for _ in 0..200 {
        if mag(cutoff) < CF_FLOOR && mag(2.0 * cutoff) < CF_FLOOR && mag(4.0 * cutoff) < CF_FLOOR {
            return Ok(Support { scale, cutoff });
        }
        cutoff *= 2.0;
    }
    Err(Error::Accuracy {
        context: "slowly-decaying characteristic function beyond the inversion cutoff".into(),
        estimate: f64::NAN,
        error_bound: mag(cutoff),
    })
}

fn oscillatory_integral<G: FnMut(f64) -> f64>(
    mut g: G,
    x: f64,
    sup: &Support,
    abs_tol: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let mut width = sup.cutoff / 16.0;
    if x != 0.0 {
        width = width.min(std::f64::consts::PI / x.abs());
    }
    let panels = (sup.cutoff / width).ceil() as usize;
    if panels > MAX_PANELS {
        return Err(Error::Accuracy {
            context: format!("Gil-Pelaez inversion at x = {x:e}: too many oscillations"),
            estimate: f64::NAN,
            error_bound: f64::INFINITY,
        });
    }
    let per_panel = abs_tol / panels as f64;
    let mut total = 0.0;
    for k in 0..panels {
        let a = k as f64 * width;
        let b = ((k + 1) as f64 * width).min(sup.cutoff);
        let est = adaptive(&mut g, a, b, per_panel, spec.rel_tol, spec.max_subdivisions)?;
        total += est.value;
    }
    Ok(total)
}

/// Probability density at `x` of the real random variable with CF `cf`.
///
/// `spec.abs_tol` is relative to the CF's natural frequency scale, so the
/// same spec serves variables measured in volts or in microvolts.
pub fn gil_pelaez_density<F: Fn(f64) -> Complex64>(cf: F, x: f64, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    let sup = support(&cf)?;
    let integrand = |w: f64| {
        let (s, c) = (w * x).sin_cos();
        let p = cf(w);
        c * p.re + s * p.im
    };
    let v = oscillatory_integral(integrand, x, &sup, spec.abs_tol * sup.scale, spec)?;
    Ok(v / std::f64::consts::PI)
}

/// Cumulative distribution at `x` of the real random variable with CF `cf`.
pub fn gil_pelaez_cdf<F: Fn(f64) -> Complex64>(cf: F, x: f64, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    let sup = support(&cf)?;
    let integrand = |w: f64| {
        let (s, c) = (w * x).sin_cos();
        let p = cf(w);
        (c * p.im - s * p.re) / w
    };
    let v = oscillatory_integral(integrand, x, &sup, spec.abs_tol, spec)?;
    Ok(0.5 - v / std::f64::consts::PI)
}
