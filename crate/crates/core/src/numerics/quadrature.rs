//! Adaptive Gauss–Kronrod quadrature on finite and semi-infinite ranges.

// Kronrod tables keep their published digits.
#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};

/// How the upper end of a semi-infinite integral is found.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailPolicy {
    /// Integrate geometrically growing panels until three consecutive
    /// panels are negligible, then add a geometric-ratio tail estimate.
    ExponentialDecayDetect,
    /// Integrate up to a fixed upper limit (in the original variable).
    FixedUpperBound(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Bisections allowed per finite panel.
    pub max_subdivisions: usize,
    pub tail_cutoff_policy: TailPolicy,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-8,
            max_subdivisions: 500,
            tail_cutoff_policy: TailPolicy::ExponentialDecayDetect,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerances(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0 && self.max_subdivisions >= 1) {
            return Err(Error::Validation(format!(
                "quadrature spec needs abs_tol > 0, rel_tol > 0, max_subdivisions ≥ 1: {self:?}"
            )));
        }
        if let TailPolicy::FixedUpperBound(u) = self.tail_cutoff_policy {
            if !u.is_finite() {
                return Err(Error::Validation("fixed upper bound must be finite".into()));
            }
        }
        Ok(())
    }

    fn tolerance(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// An integral estimate with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_208_980_050,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];
/// Weights of the embedded 10-point Gauss rule (nodes XGK[1], XGK[3], …).
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

/// One 21-point Kronrod panel with the QUADPACK error heuristic.
fn kronrod21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Estimate {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resk = WGK[10] * fc;
    let mut resg = 0.0;
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = resk * half;
    resabs *= half.abs();
    resasc *= half.abs();
    let mut error = ((resk - resg) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    Estimate { value, error }
}

/// Globally adaptive quadrature of `f` over [a, b].
pub fn integrate_finite<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    spec.validate()?;
    let est = adaptive(&mut f, a, b, spec.abs_tol, spec.rel_tol, spec.max_subdivisions)?;
    Ok(est.value)
}

pub(crate) fn adaptive<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: usize,
) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let first = kronrod21(f, a, b);
    let mut panels = vec![(a, b, first)];
    let mut total = first.value;
    let mut err = first.error;
    let mut splits = 0;
    loop {
        if !total.is_finite() {
            return Err(Error::Accuracy {
                context: format!("integrand not finite on [{a:e}, {b:e}]"),
                estimate: total,
                error_bound: f64::INFINITY,
            });
        }
        if err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(Estimate { value: total, error: err });
        }
        if splits >= max_subdivisions {
            return Err(Error::Accuracy {
                context: format!("adaptive quadrature on [{a:e}, {b:e}]"),
                estimate: total,
                error_bound: err,
            });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2.error.total_cmp(&y.1 .2.error))
            .expect("at least one panel");
        let (lo, hi, old) = panels.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if !(mid > lo.min(hi) && mid < lo.max(hi)) {
            // Panel narrower than floating-point resolution.
            return Err(Error::Accuracy {
                context: format!("panel collapse near {mid:e}"),
                estimate: total,
                error_bound: err,
            });
        }
        let left = kronrod21(f, lo, mid);
        let right = kronrod21(f, mid, hi);
        total += left.value + right.value - old.value;
        err += left.error + right.error - old.error;
        panels.push((lo, mid, left));
        panels.push((mid, hi, right));
        splits += 1;
        if splits % 64 == 0 {
            // Re-sum to shed accumulated cancellation in the running totals.
            total = panels.iter().map(|p| p.2.value).sum();
            err = panels.iter().map(|p| p.2.error).sum();
        }
    }
}

/// ∫_lower^∞ f(z) dz.
///
/// The substitution z = lower + t² removes an integrable z^{−1/2}
/// singularity at the lower endpoint; the t-range is covered by panels
/// [0, 1], [1, 2], [2, 4], … until three successive panels are negligible,
/// after which the remaining tail is extrapolated geometrically.
pub fn integrate_semi_infinite<F: FnMut(f64) -> f64>(
    f: F,
    lower: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    integrate_semi_infinite_scaled(f, lower, 1.0, spec)
}

/// As [`integrate_semi_infinite`], with the first panel spanning
/// z ∈ [lower, lower + scale].
pub fn integrate_semi_infinite_scaled<F: FnMut(f64) -> f64>(
    mut f: F,
    lower: f64,
    scale: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    spec.validate()?;
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::Validation(format!("panel scale must be positive, got {scale}")));
    }
    let mut g = |t: f64| {
        let v = f(lower + t * t);
        if v == 0.0 {
            0.0
        } else {
            2.0 * t * v
        }
    };
    if let TailPolicy::FixedUpperBound(upper) = spec.tail_cutoff_policy {
        if upper <= lower {
            return Ok(0.0);
        }
        let t_max = (upper - lower).sqrt();
        let est = adaptive(&mut g, 0.0, t_max, spec.abs_tol, spec.rel_tol, spec.max_subdivisions)?;
        return Ok(est.value);
    }

    const MAX_PANELS: usize = 160;
    let panel_abs = spec.abs_tol / 16.0;
    let panel_rel = spec.rel_tol / 4.0;
    let mut lo = 0.0;
    let mut hi = scale.sqrt();
    let mut total = 0.0;
    let mut err = 0.0;
    let mut quiet = 0;
    let mut before = 0.0;
    let mut last: Option<f64> = None;
    for _ in 0..MAX_PANELS {
        let est = adaptive(&mut g, lo, hi, panel_abs, panel_rel, spec.max_subdivisions)?;
        total += est.value;
        err += est.error;
        let negligible = est.value.abs() <= 0.1 * spec.tolerance(total);
        let shrinking = last.is_none_or(|p| est.value.abs() <= p.abs());
        quiet = if negligible && shrinking { quiet + 1 } else { 0 };
        before = last.unwrap_or(0.0);
        last = Some(est.value);
        if quiet >= 3 {
            let r = if before != 0.0 { est.value / before } else { 0.0 };
            let tail = if r > 0.0 && r < 1.0 { est.value * r / (1.0 - r) } else { 0.0 };
            total += tail;
            err += tail.abs();
            if err <= spec.tolerance(total) {
                return Ok(total);
            }
            return Err(Error::Accuracy {
                context: "semi-infinite quadrature".into(),
                estimate: total,
                error_bound: err,
            });
        }
        lo = hi;
        hi *= 2.0;
    }
    Err(Error::Accuracy {
        context: "semi-infinite quadrature: integrand tail did not decay".into(),
        estimate: total,
        error_bound: last.unwrap_or(before).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn exponential() {
        let s = QuadratureSpec::default();
        assert_relative_eq!(integrate_semi_infinite(|z| (-z).exp(), 0.0, &s).unwrap(), 1.0, max_relative = 1e-10);
    }

    #[test]
    fn inverse_sqrt_singularity() {
        let s = QuadratureSpec::default();
        let v = integrate_semi_infinite(|z| z.powf(-0.5) * (-z).exp(), 0.0, &s).unwrap();
        assert_relative_eq!(v, PI.sqrt(), max_relative = 1e-10);
        // Γ(½)/√2 from the substitution u = 2z
        let v = integrate_semi_infinite(|z| z.powf(-0.5) * (-2.0 * z).exp(), 0.0, &s).unwrap();
        assert_relative_eq!(v, (PI / 2.0).sqrt(), max_relative = 1e-10);
    }

    #[test]
    fn algebraic_tail_is_extrapolated() {
        // ∫₀^∞ dz/(1+z)² = 1
        let s = QuadratureSpec::default();
        let v = integrate_semi_infinite(|z| 1.0 / ((1.0 + z) * (1.0 + z)), 0.0, &s).unwrap();
        assert_relative_eq!(v, 1.0, max_relative = 1e-8);
    }

    #[test]
    fn wide_scale_density() {
        // Rayleigh-type density with λ = 1e-6 per m² normalizes to one.
        let lam = 1e-6;
        let s = QuadratureSpec::default();
        let v = integrate_semi_infinite(|r| 2.0 * PI * lam * r * (-PI * lam * r * r).exp(), 0.0, &s).unwrap();
        assert_relative_eq!(v, 1.0, max_relative = 1e-9);
    }

    #[test]
    fn slowly_decaying_tail_is_an_accuracy_error() {
        let s = QuadratureSpec::default();
        let r = integrate_semi_infinite(|z| 1.0 / (1.0 + z).powf(1.01), 0.0, &s);
        assert!(matches!(r, Err(Error::Accuracy { .. })));
    }

    #[test]
    fn fixed_upper_bound() {
        let s = QuadratureSpec {
            tail_cutoff_policy: TailPolicy::FixedUpperBound(2.0),
            ..QuadratureSpec::default()
        };
        let v = integrate_semi_infinite(|z| z, 0.0, &s).unwrap();
        assert_relative_eq!(v, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn finite_oscillatory() {
        let s = QuadratureSpec::default();
        let v = integrate_finite(|x| (50.0 * x).cos(), 0.0, PI, &s).unwrap();
        assert!(v.abs() < 1e-10);
    }

    #[test]
    fn invalid_spec() {
        let s = QuadratureSpec::with_tolerances(0.0, 1e-8);
        assert!(integrate_semi_infinite(|z| (-z).exp(), 0.0, &s).is_err());
    }
}
