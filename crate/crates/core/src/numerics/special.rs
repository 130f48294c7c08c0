//! Hypergeometric and incomplete-gamma functions in the regimes used by the
//! interference analysis.
//!
//! Gamma, error and regularized incomplete-gamma kernels come from `statrs`;
//! the confluent (₁F₁) and Gauss (₂F₁) hypergeometric functions are evaluated
//! here with series, Kummer/Pfaff transformations and large-argument forms.

use crate::error::{domain, Error, Result};

pub use statrs::function::gamma::{gamma, ln_gamma};

/// Relative size at which a series term is considered negligible.
const SERIES_EPS: f64 = 1e-17;
const MAX_SERIES_TERMS: usize = 20_000;
/// Beyond this |x| the confluent function switches to its asymptotic expansion.
const KUMMER_ASYMPTOTIC: f64 = 60.0;

/// Selector for [`eval_special`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecialFunction {
    /// `[a, b, x]` → ₁F₁(a; b; x)
    Kummer1F1,
    /// `[a, b, c, x]` → ₂F₁(a, b; c; x)
    Gauss2F1,
    /// `[s, x]` → γ(s, x)
    LowerIncompleteGamma,
    /// `[x]` → erfc(x)
    Erfc,
    /// `[y]` → erfc⁻¹(y)
    ErfcInverse,
}

/// Dispatches to the individual special functions by id.
pub fn eval_special(function: SpecialFunction, params: &[f64]) -> Result<f64> {
    let want = match function {
        SpecialFunction::Kummer1F1 => 3,
        SpecialFunction::Gauss2F1 => 4,
        SpecialFunction::LowerIncompleteGamma => 2,
        SpecialFunction::Erfc | SpecialFunction::ErfcInverse => 1,
    };
    if params.len() != want {
        return Err(Error::Validation(format!(
            "{function:?} takes {want} parameters, got {}",
            params.len()
        )));
    }
    match function {
        SpecialFunction::Kummer1F1 => hyp1f1(params[0], params[1], params[2]),
        SpecialFunction::Gauss2F1 => hyp2f1(params[0], params[1], params[2], params[3]),
        SpecialFunction::LowerIncompleteGamma => lower_incomplete_gamma(params[0], params[1]),
        SpecialFunction::Erfc => Ok(erfc(params[0])),
        SpecialFunction::ErfcInverse => erfc_inv(params[0]),
    }
}

/// erfc(x) = Q(½, x²). The regularized incomplete gamma keeps full
/// relative precision, which the rational erf approximation does not.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x == 0.0 {
        return 1.0;
    }
    if x.is_infinite() {
        return if x > 0.0 { 0.0 } else { 2.0 };
    }
    let q = statrs::function::gamma::gamma_ur(0.5, x * x);
    if x >= 0.0 {
        q
    } else {
        2.0 - q
    }
}

/// Inverse of [`erfc`] on (0, 2].
pub fn erfc_inv(y: f64) -> Result<f64> {
    if !(y > 0.0 && y <= 2.0) {
        return Err(domain(format!("erfc⁻¹ is defined on (0, 2], got {y}")));
    }
    if y == 1.0 {
        return Ok(0.0);
    }
    // two Newton steps polish the initial approximation
    let mut x = statrs::function::erf::erfc_inv(y);
    for _ in 0..2 {
        let slope = -std::f64::consts::FRAC_2_SQRT_PI * (-x * x).exp();
        if slope == 0.0 {
            break;
        }
        x -= (erfc(x) - y) / slope;
    }
    Ok(x)
}

/// Lower incomplete gamma γ(s, x) = ∫₀ˣ t^{s−1} e^{−t} dt for s > 0, x ≥ 0.
pub fn lower_incomplete_gamma(s: f64, x: f64) -> Result<f64> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(domain(format!(
            "γ(s, x) requires s > 0 (got s = {s}); for s = 1 − 2/η this means η > 2"
        )));
    }
    if x.is_nan() || x < 0.0 {
        return Err(domain(format!("γ(s, x) requires x ≥ 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == f64::INFINITY {
        return Ok(gamma(s));
    }
    Ok(statrs::function::gamma::gamma_lr(s, x) * gamma(s))
}

/// 1/Γ(x), exactly zero at the poles of Γ.
pub fn recip_gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        0.0
    } else {
        1.0 / gamma(x)
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// Confluent hypergeometric function ₁F₁(a; b; x).
///
/// Negative arguments — the only ones the interference analysis needs — are
/// mapped through Kummer's transformation to a positive-term series, and
/// switch to the large-|x| expansion beyond |x| = 60. Terminating cases
/// (a or b − a a non-positive integer) are summed exactly.
pub fn hyp1f1(a: f64, b: f64, x: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite()) || x.is_nan() {
        return Err(domain(format!("₁F₁({a}; {b}; {x}): non-finite parameter")));
    }
    if is_nonpositive_integer(b) {
        return Err(domain(format!("₁F₁ undefined for b = {b} (pole of the series)")));
    }
    if x == 0.0 || a == 0.0 {
        return Ok(1.0);
    }
    if is_nonpositive_integer(a) {
        return Ok(series_1f1(a, b, x)?.0);
    }
    if x > 0.0 {
        if x <= KUMMER_ASYMPTOTIC {
            return Ok(series_1f1(a, b, x)?.0);
        }
        // Kummer: ₁F₁(a; b; x) = eˣ ₁F₁(b − a; b; −x)
        let inner = hyp1f1(b - a, b, -x)?;
        return Ok(x.exp() * inner);
    }
    let y = -x;
    let c = b - a;
    if is_nonpositive_integer(c) {
        return Ok((-y).exp() * series_1f1(c, b, y)?.0);
    }
    if y > KUMMER_ASYMPTOTIC {
        if let Some(v) = asymptotic_1f1_negative(a, b, y) {
            return Ok(v);
        }
    }
    if y > 700.0 {
        return Err(Error::Accuracy {
            context: format!("₁F₁({a}; {b}; {x})"),
            estimate: f64::NAN,
            error_bound: f64::INFINITY,
        });
    }
    Ok((-y).exp() * series_1f1(c, b, y)?.0)
}

/// Plain Maclaurin series of ₁F₁; returns (sum, number of terms).
fn series_1f1(a: f64, b: f64, x: f64) -> Result<(f64, usize)> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..MAX_SERIES_TERMS {
        let kf = k as f64;
        term *= (a + kf) / (b + kf) * x / (kf + 1.0);
        sum += term;
        if term == 0.0 || (term.abs() <= SERIES_EPS * sum.abs() && kf + 1.0 > x.abs()) {
            return Ok((sum, k + 1));
        }
    }
    Err(Error::Accuracy {
        context: format!("₁F₁({a}; {b}; {x}) series"),
        estimate: sum,
        error_bound: term.abs(),
    })
}

/// Large-y expansion of ₁F₁(a; b; −y); `None` when the divergent series
/// cannot reach double precision.
fn asymptotic_1f1_negative(a: f64, b: f64, y: f64) -> Option<f64> {
    let pref = gamma(b) * recip_gamma(b - a) * y.powf(-a);
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut converged = false;
    for s in 0..200 {
        let sf = s as f64;
        let next = term * (a + sf) * (a - b + 1.0 + sf) / ((sf + 1.0) * y);
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() <= SERIES_EPS * sum.abs() {
            converged = true;
            break;
        }
    }
    // The exponentially small companion term Γ(b)/Γ(a)·e^{−y}·(−y)^{a−b}
    // is below double precision for y > 60 unless Γ(b)/Γ(a) is huge.
    let companion = (gamma(b) * recip_gamma(a)).abs() * (-y).exp() * y.powf(a - b);
    let main = pref * sum;
    if converged && companion <= 1e-16 * main.abs() {
        Some(main)
    } else {
        None
    }
}

/// Gauss hypergeometric function ₂F₁(a, b; c; x) for x < 1.
///
/// x ∈ [−1, 0): Pfaff transformation onto [0, ½]; (½, 1): direct series; x < −1: the 1/(1 − x)
/// connection formula, which requires b − a ∉ ℤ unless the series terminates.
pub fn hyp2f1(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && c.is_finite()) || x.is_nan() {
        return Err(domain(format!("₂F₁({a}, {b}; {c}; {x}): non-finite parameter")));
    }
    if is_nonpositive_integer(c) {
        return Err(domain(format!("₂F₁ undefined for c = {c}")));
    }
    if x >= 1.0 {
        return Err(domain(format!("₂F₁ is evaluated only for x < 1, got {x}")));
    }
    if x == 0.0 || a == 0.0 || b == 0.0 {
        return Ok(1.0);
    }
    if is_nonpositive_integer(a) || is_nonpositive_integer(b) {
        return series_2f1(a, b, c, x);
    }
    if (0.0..=0.5).contains(&x) {
        return series_2f1(a, b, c, x);
    }
    if x > 0.5 {
        // slow but convergent; not on any hot path
        return series_2f1(a, b, c, x);
    }
    if x >= -1.0 {
        let w = x / (x - 1.0);
        return Ok((1.0 - x).powf(-a) * series_2f1(a, c - b, c, w)?);
    }
    let d = b - a;
    if d == d.round() {
        return Err(Error::Unsupported(format!(
            "₂F₁({a}, {b}; {c}; {x}) with integer b − a and x < −1"
        )));
    }
    let u = 1.0 / (1.0 - x);
    let gc = gamma(c);
    let t1 = gc * gamma(d) * recip_gamma(b) * recip_gamma(c - a);
    let t2 = gc * gamma(-d) * recip_gamma(a) * recip_gamma(c - b);
    let mut value = 0.0;
    if t1 != 0.0 {
        value += t1 * (1.0 - x).powf(-a) * series_2f1(a, c - b, a - b + 1.0, u)?;
    }
    if t2 != 0.0 {
        value += t2 * (1.0 - x).powf(-b) * series_2f1(b, c - a, b - a + 1.0, u)?;
    }
    Ok(value)
}

fn series_2f1(a: f64, b: f64, c: f64, x: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..MAX_SERIES_TERMS {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
        sum += term;
        if term == 0.0 || term.abs() <= SERIES_EPS * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::Accuracy {
        context: format!("₂F₁({a}, {b}; {c}; {x}) series"),
        estimate: sum,
        error_bound: term.abs(),
    })
}

/// 1 − ₁F₁(−δ; 1 − δ; −x) with δ = 2/η, in the incomplete-gamma form
/// (1 − e^{−x}) − x^δ γ(1 − δ, x), which stays accurate as x → 0.
///
/// This bracket is the per-symbol exponent of the interference CF.
pub fn kummer_bracket(x: f64, eta: f64) -> Result<f64> {
    crate::error::check_eta(eta)?;
    if x.is_nan() || x < 0.0 {
        return Err(domain(format!("bracket argument must be ≥ 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let delta = 2.0 / eta;
    if x < 1e-3 {
        // 2 Σ_{k≥1} (−x)^k / ((ηk − 2) k!), rapidly convergent here.
        let mut sum = 0.0;
        let mut pow = 1.0;
        let mut fact = 1.0;
        for k in 1..12 {
            let kf = k as f64;
            pow *= -x;
            fact *= kf;
            sum += pow / ((eta * kf - 2.0) * fact);
        }
        return Ok(2.0 * sum);
    }
    let g = lower_incomplete_gamma(1.0 - delta, x)?;
    Ok(-(-x).exp_m1() - x.powf(delta) * g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn gauss_at_minus_one() {
        // direct series of ₂F₁(−½, 1; ½; −1) summed term by term
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 0..200_000 {
            let kf = k as f64;
            term *= -((-0.5 + kf) * (1.0 + kf) / ((0.5 + kf) * (kf + 1.0)));
            sum += term;
        }
        let v = hyp2f1(-0.5, 1.0, 0.5, -1.0).unwrap();
        assert_relative_eq!(v, 1.0 + PI / 4.0, max_relative = 1e-13);
        assert!((v - sum).abs() < 1e-5);
    }

    #[test]
    fn trivial_values() {
        assert_eq!(hyp1f1(-0.5, 0.5, 0.0).unwrap(), 1.0);
        assert_eq!(erfc(0.0), 1.0);
        assert_relative_eq!(
            lower_incomplete_gamma(0.5, f64::INFINITY).unwrap(),
            PI.sqrt(),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            lower_incomplete_gamma(0.5, 1e3).unwrap(),
            PI.sqrt(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn kummer_eta4_closed_form() {
        // ₁F₁(−½; ½; −x) = e^{−x} + √(πx)·erf(√x)
        for &x in &[1e-6_f64, 1e-3, 0.1, 1.0, 7.5, 42.0, 59.0, 61.0, 300.0, 1e4, 1e6] {
            let closed = (-x).exp() + (PI * x).sqrt() * (1.0 - erfc(x.sqrt()));
            let v = hyp1f1(-0.5, 0.5, -x).unwrap();
            assert_relative_eq!(v, closed, max_relative = 1e-12);
            assert_relative_eq!(kummer_bracket(x, 4.0).unwrap(), 1.0 - closed, max_relative = 1e-9);
        }
    }

    #[test]
    fn kummer_general_eta_two_forms_agree() {
        for &eta in &[2.5, 3.0, 3.7, 5.0] {
            let d = 2.0 / eta;
            for &x in &[0.01, 0.5, 3.0, 25.0, 80.0, 2e3] {
                let direct = hyp1f1(-d, 1.0 - d, -x).unwrap();
                let bracket = kummer_bracket(x, eta).unwrap();
                assert_relative_eq!(1.0 - direct, bracket, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn kummer_terminating_and_positive() {
        // ₁F₁(−2; 3/2; z) = 1 − 4z/3 + 4z²/15
        let z: f64 = 2.3;
        assert_relative_eq!(
            hyp1f1(-2.0, 1.5, z).unwrap(),
            1.0 - 4.0 * z / 3.0 + 4.0 * z * z / 15.0,
            max_relative = 1e-14
        );
        // ₁F₁(1; 2; x) = (eˣ − 1)/x
        for &x in &[0.3, 5.0, 70.0] {
            assert_relative_eq!(hyp1f1(1.0, 2.0, x).unwrap(), x.exp_m1() / x, max_relative = 1e-12);
        }
        // ₁F₁(3; 2; −y) = e^{−y}(1 − y/2)·… via Kummer: e^{−y}₁F₁(−1; 2; y) = e^{−y}(1 − y/2)
        for &y in &[0.5, 10.0, 90.0] {
            let v = hyp1f1(3.0, 2.0, -y).unwrap();
            assert_relative_eq!(v, (-y).exp() * (1.0 - y / 2.0), max_relative = 1e-12);
        }
    }

    #[test]
    fn gauss_arctan_identity_large_arguments() {
        for &t in &[1e-8, 0.3, 1.0, 2.0, 17.0, 1e3, 1e6, 1e10] {
            let v = hyp2f1(-0.5, 1.0, 0.5, -t).unwrap();
            let s = t.sqrt();
            assert_relative_eq!(v, 1.0 + s * s.atan(), max_relative = 1e-11);
        }
    }

    #[test]
    fn gauss_baseline_regime() {
        // ₂F₁(1, ½; 3/2; −t) = arctan(√t)/√t
        for &t in &[1e-6f64, 0.2, 0.9, 1.5, 40.0, 1e5, 1e9] {
            let s: f64 = t.sqrt();
            assert_relative_eq!(hyp2f1(1.0, 0.5, 1.5, -t).unwrap(), s.atan() / s, max_relative = 1e-11);
        }
    }

    #[test]
    fn gauss_positive_argument() {
        // ₂F₁(1, 1; 2; x) = −ln(1 − x)/x
        for &x in &[0.1, 0.5, 0.8, 0.95] {
            let exact = -(1.0f64 - x).ln() / x;
            assert_relative_eq!(hyp2f1(1.0, 1.0, 2.0, x).unwrap(), exact, max_relative = 1e-11);
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(lower_incomplete_gamma(0.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(lower_incomplete_gamma(-0.5, 1.0), Err(Error::Domain(_))));
        assert!(kummer_bracket(1.0, 2.0).is_err());
        assert!(hyp1f1(1.0, -2.0, 0.5).is_err());
        assert!(erfc_inv(0.0).is_err());
        assert!(eval_special(SpecialFunction::Erfc, &[1.0, 2.0]).is_err());
    }

    #[test]
    fn erfc_inverse_roundtrip() {
        for &x in &[0.0, 0.1, 1.0, 2.5, 5.0] {
            let y = erfc(x);
            assert_relative_eq!(erfc_inv(y).unwrap(), x, epsilon = 1e-12, max_relative = 1e-12);
        }
    }
}
