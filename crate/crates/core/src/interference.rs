//! Statistics of the complex baseband aggregate interference
//! i_agg = Σ_k √P s_k h_k r_k^{−η/2} from a PPP of interferers outside r₀.
//!
//! All quantities are per real dimension unless stated otherwise; the field
//! is circularly symmetric, so Re and Im parts share every statistic.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{check_eta, domain, Error, Result};
use crate::geometry::NetworkConfig;
use crate::numerics::inversion::{gil_pelaez_cdf, gil_pelaez_density};
use crate::numerics::quadrature::QuadratureSpec;
use crate::numerics::special::{gamma, kummer_bracket, ln_gamma};

const UNIT_TOL: f64 = 1e-12;

/// A unit-energy, zero-mean symbol alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    name: String,
    symbols: Vec<Complex64>,
}

impl Constellation {
    pub fn new(name: impl Into<String>, symbols: Vec<Complex64>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::Validation("constellation has no symbols".into()));
        }
        let m = symbols.len() as f64;
        let energy = symbols.iter().map(|s| s.norm_sqr()).sum::<f64>() / m;
        let mean = symbols.iter().sum::<Complex64>() / m;
        if (energy - 1.0).abs() > UNIT_TOL {
            return Err(Error::Validation(format!("constellation energy is {energy}, expected 1")));
        }
        if mean.norm() > UNIT_TOL {
            return Err(Error::Validation(format!("constellation mean is {mean}, expected 0")));
        }
        Ok(Self {
            name: name.into(),
            symbols,
        })
    }

    /// Square M-QAM, normalized to unit average energy.
    pub fn qam(m: usize) -> Result<Self> {
        let side = (m as f64).sqrt().round() as usize;
        if side * side != m || side < 2 || side % 2 != 0 {
            return Err(domain(format!("square QAM needs M = 4, 16, 64, …; got {m}")));
        }
        let levels: Vec<f64> = (0..side).map(|i| 2.0 * i as f64 - (side as f64 - 1.0)).collect();
        let raw: Vec<Complex64> = levels
            .iter()
            .flat_map(|&re| levels.iter().map(move |&im| Complex64::new(re, im)))
            .collect();
        let norm = (2.0 * (m as f64 - 1.0) / 3.0).sqrt();
        Self::new(format!("{m}-QAM"), raw.into_iter().map(|s| s / norm).collect())
    }

    pub fn bpsk() -> Self {
        Self::new("BPSK", vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]).expect("valid")
    }

    pub fn psk(m: usize) -> Result<Self> {
        if m < 2 {
            return Err(domain(format!("PSK needs M ≥ 2, got {m}")));
        }
        let symbols = (0..m)
            .map(|k| Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64))
            .collect();
        Self::new(format!("{m}-PSK"), symbols)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn symbols(&self) -> &[Complex64] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// E|s|^p over equiprobable symbols.
    pub fn abs_moment(&self, p: f64) -> f64 {
        self.symbols.iter().map(|s| s.norm().powf(p)).sum::<f64>() / self.symbols.len() as f64
    }

    /// Distinct symbol energies |s|² with their probabilities.
    pub fn energy_levels(&self) -> Vec<(f64, f64)> {
        let mut energies: Vec<f64> = self.symbols.iter().map(|s| s.norm_sqr()).collect();
        energies.sort_by(f64::total_cmp);
        let w = 1.0 / energies.len() as f64;
        let mut out: Vec<(f64, f64)> = Vec::new();
        for e in energies {
            match out.last_mut() {
                Some((last, weight)) if (e - *last).abs() <= 1e-12 * e.max(1.0) => *weight += w,
                _ => out.push((e, w)),
            }
        }
        out
    }
}

/// Symbols carried by the interferers.
#[derive(Debug, Clone, PartialEq)]
pub enum SignalingMode {
    Exact(Constellation),
    /// Unit-variance circularly-symmetric complex Gaussian symbols.
    Gaussian,
}

impl SignalingMode {
    /// E|s|^p; Γ(1 + p/2) for Gaussian symbols (|s|² is unit exponential).
    pub fn abs_moment(&self, p: f64) -> f64 {
        match self {
            Self::Exact(c) => c.abs_moment(p),
            Self::Gaussian => gamma(1.0 + 0.5 * p),
        }
    }

    fn ln_abs_moment(&self, p: f64) -> f64 {
        match self {
            Self::Exact(c) => c.abs_moment(p).ln(),
            Self::Gaussian => ln_gamma(1.0 + 0.5 * p),
        }
    }
}

fn check_r0(r0: f64) -> Result<()> {
    if r0 > 0.0 && r0.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("exclusion radius r0 must be positive, got {r0}")))
    }
}

/// Laplace transform E e^{−zI} of the interference power
/// I = P Σ |g_k|² r_k^{−η} (unit-mean exponential g) with interferers
/// outside r₀; equivalently the Gaussian-signaling CF at |ω|² = 4z.
pub(crate) fn baseline_exponent(z: f64, lambda: f64, power: f64, eta: f64, r0: f64) -> Result<f64> {
    if z == 0.0 {
        return Ok(0.0);
    }
    if eta == 4.0 {
        let s = (z * power).sqrt();
        return Ok(-PI * lambda * s * (s / (r0 * r0)).atan());
    }
    baseline_exponent_hypergeometric(z, lambda, power, eta, r0)
}

pub(crate) fn baseline_exponent_hypergeometric(z: f64, lambda: f64, power: f64, eta: f64, r0: f64) -> Result<f64> {
    let d = 2.0 / eta;
    let f = crate::numerics::special::hyp2f1(1.0, 1.0 - d, 2.0 - d, -z * power / r0.powf(eta))?;
    Ok(-2.0 * PI * lambda * z * power * r0.powf(2.0 - eta) / (eta - 2.0) * f)
}

/// Characteristic function of i_agg at |ω| (real by circular symmetry).
pub fn cf_aggregate(omega: f64, cfg: &NetworkConfig, mode: &SignalingMode, r0: f64) -> Result<f64> {
    Ok(cf_log(omega, cfg, mode, r0)?.exp())
}

/// ln of [`cf_aggregate`].
pub fn cf_log(omega: f64, cfg: &NetworkConfig, mode: &SignalingMode, r0: f64) -> Result<f64> {
    cfg.validate()?;
    check_r0(r0)?;
    let w2 = omega * omega;
    match mode {
        SignalingMode::Exact(c) => {
            let base = w2 * cfg.power / (4.0 * r0.powf(cfg.eta));
            let mut acc = 0.0;
            for (energy, weight) in c.energy_levels() {
                acc += weight * kummer_bracket(base * energy, cfg.eta)?;
            }
            Ok(PI * cfg.lambda_bs * r0 * r0 * acc)
        }
        SignalingMode::Gaussian => baseline_exponent(0.25 * w2, cfg.lambda_bs, cfg.power, cfg.eta, r0),
    }
}

/// The r₀ → 0 limit: a symmetric α-stable CF with α = 4/η.
pub fn cf_alpha_stable_limit(omega: f64, cfg: &NetworkConfig, mode: &SignalingMode) -> Result<f64> {
    cfg.validate()?;
    Ok((-alpha_stable_dispersion(cfg, mode) * omega.abs().powf(4.0 / cfg.eta)).exp())
}

/// c in φ(ω) = exp(−c|ω|^{4/η}).
pub fn alpha_stable_dispersion(cfg: &NetworkConfig, mode: &SignalingMode) -> f64 {
    let d = 2.0 / cfg.eta;
    PI * cfg.lambda_bs * cfg.power.powf(d) * mode.abs_moment(2.0 * d) * gamma(1.0 - d) / 2f64.powf(2.0 * d)
}

/// Per-dimension cumulant κ_n (zero for odd n).
pub fn cumulant(n: usize, cfg: &NetworkConfig, mode: &SignalingMode, r0: f64) -> Result<f64> {
    cfg.validate()?;
    check_r0(r0)?;
    if n == 0 {
        return Err(domain("cumulants start at order 1"));
    }
    if n % 2 == 1 {
        return Ok(0.0);
    }
    let k = (n / 2) as f64;
    let eta = cfg.eta;
    // (2k)!/k! · 2πλ E|s|^{2k} P^k r₀^{2−ηk} / ((ηk − 2) 4^k)
    let log = ln_gamma(2.0 * k + 1.0) - ln_gamma(k + 1.0) + (2.0 * PI * cfg.lambda_bs).ln() + mode.ln_abs_moment(2.0 * k)
        + k * cfg.power.ln()
        + (2.0 - eta * k) * r0.ln()
        - (eta * k - 2.0).ln()
        - k * 4f64.ln();
    Ok(log.exp())
}

/// Moment of order n from cumulants κ₁…κ_n (`cumulants[j]` = κ_{j+1}).
pub fn moment_from_cumulants(n: usize, cumulants: &[f64]) -> Result<f64> {
    if cumulants.len() < n {
        return Err(domain(format!(
            "moment of order {n} needs {n} cumulants, got {}",
            cumulants.len()
        )));
    }
    let mut moments = vec![1.0f64; n + 1];
    for k in 1..=n {
        let mut m = 0.0;
        let mut binom = 1.0; // C(k−1, j−1)
        for j in 1..=k {
            m += binom * cumulants[j - 1] * moments[k - j];
            binom = binom * (k - j) as f64 / j as f64;
        }
        moments[k] = m;
    }
    Ok(moments[n])
}

/// E|i_agg|² = 2πλP r₀^{2−η}/(η − 2).
pub fn mean_power(cfg: &NetworkConfig, r0: f64) -> Result<f64> {
    cfg.validate()?;
    check_r0(r0)?;
    Ok(2.0 * PI * cfg.lambda_bs * cfg.power * r0.powf(2.0 - cfg.eta) / (cfg.eta - 2.0))
}

/// Per-dimension kurtosis κ₄/κ₂² = 3(η−2)² E|s|⁴ / (4πλ(η−1)r₀²).
pub fn kurtosis(cfg: &NetworkConfig, mode: &SignalingMode, r0: f64) -> Result<f64> {
    cfg.validate()?;
    check_r0(r0)?;
    let eta = cfg.eta;
    Ok(3.0 * (eta - 2.0).powi(2) * mode.abs_moment(4.0) / (4.0 * PI * cfg.lambda_bs * (eta - 1.0) * r0 * r0))
}

/// Variances σ_q² of the equivalent-in-distribution representation
/// φ(ω) = exp{Σ_q (−σ_q²|ω|²/4)^q}.
#[derive(Debug, Clone, PartialEq)]
pub struct EiDRepresentation {
    pub variances: Vec<f64>,
    pub truncation_order: usize,
}

impl EiDRepresentation {
    fn term(&self, q: usize, omega: f64) -> f64 {
        (-self.variances[q - 1] * omega * omega / 4.0).powi(q as i32)
    }

    /// The truncated CF exp{Σ_{q ≤ Q} (−σ_q²ω²/4)^q}.
    pub fn characteristic_function(&self, omega: f64) -> f64 {
        (1..=self.truncation_order).map(|q| self.term(q, omega)).sum::<f64>().exp()
    }

    /// Magnitude of the last retained exponent term at ω — the a-posteriori
    /// truncation indicator.
    pub fn truncation_bound(&self, omega: f64) -> f64 {
        self.term(self.truncation_order, omega).abs()
    }
}

fn ln_sigma_q(q: usize, cfg: &NetworkConfig, mode: &SignalingMode, r0: f64) -> f64 {
    let qf = q as f64;
    let eta = cfg.eta;
    ((2.0 * PI * cfg.lambda_bs).ln() + (2.0 - eta * qf) * r0.ln() + qf * cfg.power.ln() + mode.ln_abs_moment(2.0 * qf)
        - (eta * qf - 2.0).ln()
        - ln_gamma(qf + 1.0))
        / qf
}

/// σ_q², q = 1..=Q.
pub fn eid_variances(cfg: &NetworkConfig, constellation: &Constellation, r0: f64, truncation: usize) -> Result<EiDRepresentation> {
    cfg.validate()?;
    check_r0(r0)?;
    if truncation == 0 {
        return Err(domain("EiD truncation order must be ≥ 1"));
    }
    let mode = SignalingMode::Exact(constellation.clone());
    let variances = (1..=truncation).map(|q| ln_sigma_q(q, cfg, &mode, r0).exp()).collect();
    Ok(EiDRepresentation {
        variances,
        truncation_order: truncation,
    })
}

/// Smallest Q whose next exponent term is below `tol` for every |ω| ≤ omega_max.
///
/// The exponent series alternates with terms as large as e^{x_max},
/// x_max = ω²P max|s|²/(4r₀^η), so the reconstruction is only meaningful
/// while x_max stays moderate (a few tens at most).
pub fn eid_variances_for_range(
    cfg: &NetworkConfig,
    constellation: &Constellation,
    r0: f64,
    omega_max: f64,
    tol: f64,
) -> Result<EiDRepresentation> {
    const MAX_Q: usize = 400;
    let full = eid_variances(cfg, constellation, r0, MAX_Q)?;
    // Terms are monotone in |ω|, so checking ω_max suffices.
    let mut q = 1;
    while q < MAX_Q {
        let next = full.term(q + 1, omega_max).abs();
        let later = full.term((q + 2).min(MAX_Q), omega_max).abs();
        if next < tol && later <= next {
            let mut rep = full;
            rep.variances.truncate(q);
            rep.truncation_order = q;
            return Ok(rep);
        }
        q += 1;
    }
    Err(Error::Accuracy {
        context: format!("EiD truncation for |ω| ≤ {omega_max:e}"),
        estimate: f64::NAN,
        error_bound: full.term(MAX_Q, omega_max).abs(),
    })
}

/// Per-dimension CDF of Re(i_agg) by Gil-Pelaez inversion.
pub fn per_dimension_cdf(x: f64, cfg: &NetworkConfig, mode: &SignalingMode, r0: f64, spec: &QuadratureSpec) -> Result<f64> {
    cf_log(0.0, cfg, mode, r0)?;
    gil_pelaez_cdf(|w| Complex64::new(cf_aggregate(w, cfg, mode, r0).unwrap_or(f64::NAN), 0.0), x, spec)
}

/// Per-dimension density of Re(i_agg) by Gil-Pelaez inversion.
pub fn per_dimension_pdf(x: f64, cfg: &NetworkConfig, mode: &SignalingMode, r0: f64, spec: &QuadratureSpec) -> Result<f64> {
    cf_log(0.0, cfg, mode, r0)?;
    gil_pelaez_density(|w| Complex64::new(cf_aggregate(w, cfg, mode, r0).unwrap_or(f64::NAN), 0.0), x, spec)
}

/// CDF of the α-stable limit (r₀ → 0) per dimension.
pub fn alpha_stable_cdf(x: f64, cfg: &NetworkConfig, mode: &SignalingMode, spec: &QuadratureSpec) -> Result<f64> {
    check_eta(cfg.eta)?;
    let c = alpha_stable_dispersion(cfg, mode);
    let alpha = 4.0 / cfg.eta;
    if alpha == 1.0 {
        // Cauchy with scale c
        return Ok(0.5 + (x / c).atan() / PI);
    }
    gil_pelaez_cdf(|w| Complex64::new((-c * w.abs().powf(alpha)).exp(), 0.0), x, spec)
}

/// CDF of the zero-mean Gaussian with the given variance.
pub fn gaussian_cdf(x: f64, variance: f64) -> f64 {
    0.5 * crate::numerics::special::erfc(-x / (2.0 * variance).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fig5(r0: f64) -> NetworkConfig {
        NetworkConfig::new(1e-6, 10.0, 4.0, 0.0, r0).unwrap()
    }

    fn qam4() -> SignalingMode {
        SignalingMode::Exact(Constellation::qam(4).unwrap())
    }

    #[test]
    fn constellations_are_normalized() {
        for m in [4, 16, 64] {
            let c = Constellation::qam(m).unwrap();
            assert_eq!(c.len(), m);
            assert_relative_eq!(c.abs_moment(2.0), 1.0, max_relative = 1e-14);
        }
        assert_relative_eq!(Constellation::qam(16).unwrap().abs_moment(4.0), 1.32, max_relative = 1e-12);
        assert_relative_eq!(Constellation::qam(16).unwrap().abs_moment(6.0), 1.96, max_relative = 1e-12);
        assert!(Constellation::qam(8).is_err());
        assert_eq!(Constellation::psk(8).unwrap().energy_levels().len(), 1);
        assert_eq!(Constellation::qam(16).unwrap().energy_levels().len(), 3);
        assert!(Constellation::new("bad", vec![Complex64::new(1.0, 0.0)]).is_err());
    }

    #[test]
    fn cf_at_origin_and_domain() {
        assert_eq!(cf_aggregate(0.0, &fig5(250.0), &qam4(), 250.0).unwrap(), 1.0);
        assert_eq!(cf_aggregate(0.0, &fig5(250.0), &SignalingMode::Gaussian, 250.0).unwrap(), 1.0);
        let mut bad = fig5(250.0);
        bad.eta = 2.0;
        assert!(matches!(cf_aggregate(1.0, &bad, &qam4(), 250.0), Err(Error::Domain(_))));
    }

    #[test]
    fn exact_cf_two_printed_forms_agree() {
        // the ₁F₁ form against the incomplete-gamma form used internally
        let cfg = NetworkConfig::new(3e-6, 5.0, 3.5, 0.0, 120.0).unwrap();
        let c = Constellation::qam(16).unwrap();
        let d = 2.0 / cfg.eta;
        for i in 1..30 {
            let w = 2e3 * i as f64;
            let via_1f1: f64 = c
                .symbols()
                .iter()
                .map(|s| {
                    let x = w * w * cfg.power * s.norm_sqr() / (4.0 * 120f64.powf(cfg.eta));
                    1.0 - crate::numerics::special::hyp1f1(-d, 1.0 - d, -x).unwrap()
                })
                .sum::<f64>()
                / c.len() as f64;
            let expected = (PI * cfg.lambda_bs * 120.0 * 120.0 * via_1f1).exp();
            assert_relative_eq!(
                cf_aggregate(w, &cfg, &SignalingMode::Exact(c.clone()), 120.0).unwrap(),
                expected,
                max_relative = 1e-11
            );
        }
    }

    #[test]
    fn exact_and_gaussian_modes_close_in_dense_networks() {
        // πλr₀² ≈ 200: both fields are close to Gaussian
        let r0 = 8000.0;
        let cfg = fig5(r0);
        let sigma = cumulant(2, &cfg, &qam4(), r0).unwrap().sqrt();
        for i in 0..40 {
            let w = i as f64 * 0.25 / sigma;
            let a = cf_aggregate(w, &cfg, &qam4(), r0).unwrap();
            let b = cf_aggregate(w, &cfg, &SignalingMode::Gaussian, r0).unwrap();
            assert!((a - b).abs() < 1e-3, "ω = {w}: {a} vs {b}");
        }
    }

    #[test]
    fn alpha_stable_limit() {
        let cfg = fig5(1.0);
        for i in 1..=10 {
            let w = 1e4 * i as f64;
            let lim = cf_alpha_stable_limit(w, &cfg, &qam4()).unwrap();
            let near = cf_aggregate(w, &cfg, &qam4(), 1e-3).unwrap();
            assert!((lim - near).abs() < 1e-6);
        }
        for eta in [3.0, 4.0, 5.5] {
            let mut cfg = cfg;
            cfg.eta = eta;
            let e1 = cf_alpha_stable_limit(3e4, &cfg, &qam4()).unwrap().ln();
            let e2 = cf_alpha_stable_limit(6e4, &cfg, &qam4()).unwrap().ln();
            assert_relative_eq!(e2 / e1, 2f64.powf(4.0 / eta), max_relative = 1e-12);
        }
        assert_eq!(cf_alpha_stable_limit(0.0, &cfg, &qam4()).unwrap(), 1.0);
    }

    #[test]
    fn table_of_cumulants() {
        let r0 = 250.0;
        let cfg = fig5(r0);
        let lam = cfg.lambda_bs;
        let p = cfg.power;
        for n in [1, 3, 5] {
            assert_eq!(cumulant(n, &cfg, &qam4(), r0).unwrap(), 0.0);
        }
        let k2 = cumulant(2, &cfg, &qam4(), r0).unwrap();
        assert_relative_eq!(k2, PI * lam * p / (2.0 * r0 * r0), max_relative = 1e-13);
        assert_relative_eq!(k2, 2.5133e-10, max_relative = 1e-4);
        assert_relative_eq!(k2, cumulant(2, &cfg, &SignalingMode::Gaussian, r0).unwrap(), max_relative = 1e-13);
        let unit = PI * lam * p * p / r0.powi(6);
        let k4 = cumulant(4, &cfg, &qam4(), r0).unwrap();
        assert_relative_eq!(k4, 0.25 * unit, max_relative = 1e-13);
        let k4g = cumulant(4, &cfg, &SignalingMode::Gaussian, r0).unwrap();
        assert_relative_eq!(k4g / k4, 2.0, max_relative = 1e-13);
        let q16 = SignalingMode::Exact(Constellation::qam(16).unwrap());
        assert_relative_eq!(cumulant(4, &cfg, &q16, r0).unwrap(), 0.33 * unit, max_relative = 1e-12);
        let unit6 = PI * lam * p.powi(3) / r0.powi(10);
        assert_relative_eq!(cumulant(6, &cfg, &qam4(), r0).unwrap(), 0.375 * unit6, max_relative = 1e-12);
        assert_relative_eq!(cumulant(6, &cfg, &q16, r0).unwrap(), 0.735 * unit6, max_relative = 1e-12);
        assert_relative_eq!(cumulant(6, &cfg, &SignalingMode::Gaussian, r0).unwrap(), 2.25 * unit6, max_relative = 1e-12);
    }

    #[test]
    fn moments_from_cumulants() {
        let k = [0.0, 2.0, 0.0, 5.0, 0.0, 7.0];
        assert_eq!(moment_from_cumulants(2, &k).unwrap(), 2.0);
        assert_eq!(moment_from_cumulants(4, &k).unwrap(), 5.0 + 3.0 * 4.0);
        assert_eq!(moment_from_cumulants(6, &k).unwrap(), 7.0 + 15.0 * 2.0 * (5.0 + 4.0));
        assert_eq!(moment_from_cumulants(4, &[0.0; 4]).unwrap(), 0.0);
        assert!(moment_from_cumulants(6, &k[..4]).is_err());
        // standard normal: moments 1, 3, 15
        let g = [0.0, 1.0, 0.0, 0.0, 0.0, 0.0];
        assert_eq!(moment_from_cumulants(6, &g).unwrap(), 15.0);
    }

    #[test]
    fn power_and_kurtosis() {
        let cfg = fig5(250.0);
        let pw = mean_power(&cfg, 250.0).unwrap();
        assert_relative_eq!(pw, PI * 1e-6 * 10.0 / 62500.0, max_relative = 1e-13);
        assert_relative_eq!(pw, 5.0265e-10, max_relative = 1e-4);
        assert_relative_eq!(pw, 2.0 * cumulant(2, &cfg, &qam4(), 250.0).unwrap(), max_relative = 1e-13);
        let mut twice = cfg;
        twice.lambda_bs *= 2.0;
        assert_eq!(mean_power(&twice, 250.0).unwrap() / pw, 2.0);
        assert!(mean_power(&cfg, 1e12).unwrap() < 1e-28);
        let norm = PI * cfg.lambda_bs * 250.0 * 250.0;
        assert_relative_eq!(kurtosis(&cfg, &qam4(), 250.0).unwrap() * norm, 1.0, max_relative = 1e-13);
        assert_relative_eq!(kurtosis(&cfg, &SignalingMode::Gaussian, 250.0).unwrap() * norm, 2.0, max_relative = 1e-13);
        let values: Vec<f64> = [1.0, 10.0, 100.0]
            .iter()
            .map(|&p| {
                let mut c = cfg;
                c.power = p;
                kurtosis(&c, &qam4(), 250.0).unwrap()
            })
            .collect();
        assert_eq!(values[0], values[1]);
        assert_eq!(values[1], values[2]);
        // κ₄/κ₂² from the cumulant closed forms
        let ratio = cumulant(4, &cfg, &qam4(), 250.0).unwrap() / cumulant(2, &cfg, &qam4(), 250.0).unwrap().powi(2);
        assert_relative_eq!(ratio, kurtosis(&cfg, &qam4(), 250.0).unwrap(), max_relative = 1e-12);
    }

    #[test]
    fn eid_reconstruction() {
        let r0 = 250.0;
        let cfg = fig5(r0);
        let c = Constellation::qam(4).unwrap();
        let rep = eid_variances(&cfg, &c, r0, 10).unwrap();
        assert!(rep.variances.iter().all(|&v| v > 0.0));
        assert_relative_eq!(rep.variances[0], mean_power(&cfg, r0).unwrap(), max_relative = 1e-13);
        let sigma = rep.variances[0].sqrt();
        // beyond a few σ₁⁻¹ the alternating exponent series cancels catastrophically
        let wmax = 2.0 / sigma;
        for c in [Constellation::qam(4).unwrap(), Constellation::qam(16).unwrap()] {
            let rep = eid_variances_for_range(&cfg, &c, r0, wmax, 1e-12).unwrap();
            for i in 0..=30 {
                let w = wmax * i as f64 / 30.0;
                let exact = cf_aggregate(w, &cfg, &SignalingMode::Exact(c.clone()), r0).unwrap();
                assert!((rep.characteristic_function(w) - exact).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn per_dimension_cdf_is_symmetric() {
        let cfg = fig5(250.0);
        let s = QuadratureSpec::default();
        let sigma = cumulant(2, &cfg, &qam4(), 250.0).unwrap().sqrt();
        let f0 = per_dimension_cdf(0.0, &cfg, &qam4(), 250.0, &s).unwrap();
        assert!((f0 - 0.5).abs() < 1e-9);
        let a = per_dimension_cdf(sigma, &cfg, &qam4(), 250.0, &s).unwrap();
        let b = per_dimension_cdf(-sigma, &cfg, &qam4(), 250.0, &s).unwrap();
        assert!((a + b - 1.0).abs() < 1e-9);
    }
}
