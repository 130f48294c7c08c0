//! Symbol error probability, SINR outage and ergodic rate.
//!
//! Every evaluator consumes a [`LaplaceTransform`] of the interference in
//! one of two conventions (see [`LinkMode`]).

use std::f64::consts::PI;
use std::fmt;

use crate::error::{domain, Error, Result};
use crate::geometry::NetworkConfig;
use crate::interference::Constellation;
use crate::numerics::derivative::{lt_derivative, MAX_ORDER};
use crate::numerics::quadrature::{integrate_semi_infinite, integrate_semi_infinite_scaled, QuadratureSpec};
use crate::numerics::special::{erfc, erfc_inv, hyp1f1, ln_gamma};
use crate::transforms::{lt_zeta, LaplaceTransform};

/// One term w_c·erfc^c(√(β_c·γ)) of the SEP expression.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SepTerm {
    pub power: u8,
    pub weight: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeName {
    Bpsk,
    Bfsk,
    Qpsk,
    Mqam(u32),
    Mpam(u32),
    /// Union-type upper bound for M-PSK.
    MpskUb(u32),
    DeBpsk,
    Msk,
}

impl fmt::Display for SchemeName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Bpsk => write!(f, "bpsk"),
            Self::Bfsk => write!(f, "bfsk"),
            Self::Qpsk => write!(f, "qpsk"),
            Self::Mqam(m) => write!(f, "{m}qam"),
            Self::Mpam(m) => write!(f, "{m}pam"),
            Self::MpskUb(m) => write!(f, "{m}psk-ub"),
            Self::DeBpsk => write!(f, "de-bpsk"),
            Self::Msk => write!(f, "msk"),
        }
    }
}

/// SEP weighting factors of a modulation scheme over AWGN:
/// SEP(γ) = Σ_c w_c erfc^c(√(β_c γ)).
#[derive(Debug, Clone, PartialEq)]
pub struct ModulationScheme {
    name: SchemeName,
    terms: Vec<SepTerm>,
}

fn check_order(m: u32, what: &str) -> Result<()> {
    if m >= 2 {
        Ok(())
    } else {
        Err(domain(format!("{what} needs M ≥ 2, got {m}")))
    }
}

impl ModulationScheme {
    fn single(name: SchemeName, w: f64, beta: f64) -> Self {
        Self {
            name,
            terms: vec![SepTerm {
                power: 1,
                weight: w,
                beta,
            }],
        }
    }

    pub fn bpsk() -> Self {
        Self::single(SchemeName::Bpsk, 0.5, 0.5)
    }

    pub fn bfsk() -> Self {
        Self::single(SchemeName::Bfsk, 0.5, 1.0)
    }

    pub fn qpsk() -> Self {
        Self {
            name: SchemeName::Qpsk,
            terms: vec![
                SepTerm {
                    power: 1,
                    weight: 1.0,
                    beta: 0.5,
                },
                SepTerm {
                    power: 2,
                    weight: -0.25,
                    beta: 0.5,
                },
            ],
        }
    }

    /// Square M-QAM.
    pub fn mqam(m: u32) -> Result<Self> {
        let side = (m as f64).sqrt();
        if side.fract() != 0.0 || m < 4 {
            return Err(domain(format!("square M-QAM needs M = 4, 16, 64, …; got {m}")));
        }
        let q = (side - 1.0) / side;
        let beta = 1.5 / (m as f64 - 1.0);
        Ok(Self {
            name: SchemeName::Mqam(m),
            terms: vec![
                SepTerm {
                    power: 1,
                    weight: 2.0 * q,
                    beta,
                },
                SepTerm {
                    power: 2,
                    weight: -q * q,
                    beta,
                },
            ],
        })
    }

    pub fn mpam(m: u32) -> Result<Self> {
        check_order(m, "M-PAM")?;
        let mf = m as f64;
        Ok(Self::single(SchemeName::Mpam(m), (mf - 1.0) / mf, 3.0 / (mf * mf - 1.0)))
    }

    /// erfc(√(γ)·sin(π/M)): the nearest-neighbour upper bound for M-PSK.
    pub fn mpsk_upper_bound(m: u32) -> Result<Self> {
        check_order(m, "M-PSK")?;
        let s = (PI / m as f64).sin();
        Ok(Self::single(SchemeName::MpskUb(m), 1.0, s * s))
    }

    /// Differentially encoded BPSK: erfc(√γ) − ½erfc²(√γ).
    pub fn de_bpsk() -> Self {
        Self {
            name: SchemeName::DeBpsk,
            terms: vec![
                SepTerm {
                    power: 1,
                    weight: 1.0,
                    beta: 1.0,
                },
                SepTerm {
                    power: 2,
                    weight: -0.5,
                    beta: 1.0,
                },
            ],
        }
    }

    pub fn msk() -> Self {
        Self::single(SchemeName::Msk, 0.5, 1.0)
    }

    /// Accepts `bpsk`, `bfsk`, `qpsk`, `msk`, `de-bpsk`, `16qam`/`16-qam`,
    /// `4pam`, `8psk-ub`, case-insensitively.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase().replace(['-', '_'], "");
        match t.as_str() {
            "bpsk" => return Ok(Self::bpsk()),
            "bfsk" => return Ok(Self::bfsk()),
            "qpsk" => return Ok(Self::qpsk()),
            "msk" => return Ok(Self::msk()),
            "debpsk" => return Ok(Self::de_bpsk()),
            _ => {}
        }
        let digits: String = t.chars().take_while(|c| c.is_ascii_digit()).collect();
        let rest = &t[digits.len()..];
        let m: u32 = digits
            .parse()
            .map_err(|_| Error::Validation(format!("unknown modulation '{s}'")))?;
        match rest {
            "qam" => Self::mqam(m),
            "pam" => Self::mpam(m),
            "psk" | "pskub" => Self::mpsk_upper_bound(m),
            _ => Err(Error::Validation(format!("unknown modulation '{s}'"))),
        }
    }

    pub fn name(&self) -> SchemeName {
        self.name
    }

    /// Terms with nonzero weight.
    pub fn terms(&self) -> &[SepTerm] {
        &self.terms
    }

    /// The SEP at zero SNR (Σ w_c), which is (M−1)/M for exact expressions.
    pub fn sep_at_zero_snr(&self) -> f64 {
        self.terms.iter().map(|t| t.weight).sum()
    }

    /// Matching interferer constellation, where one exists.
    pub fn constellation(&self) -> Option<Constellation> {
        match self.name {
            SchemeName::Bpsk | SchemeName::DeBpsk => Some(Constellation::bpsk()),
            SchemeName::Qpsk => Constellation::qam(4).ok(),
            SchemeName::Mqam(m) => Constellation::qam(m as usize).ok(),
            SchemeName::MpskUb(m) => Constellation::psk(m as usize).ok(),
            _ => None,
        }
    }
}

/// SEP over AWGN at the given SNR.
pub fn asep_awgn(snr: f64, scheme: &ModulationScheme) -> Result<f64> {
    if !(snr >= 0.0) {
        return Err(domain(format!("SNR must be ≥ 0, got {snr}")));
    }
    Ok(scheme
        .terms
        .iter()
        .map(|t| t.weight * erfc((t.beta * snr).sqrt()).powi(t.power as i32))
        .sum())
}

/// How a transform relates to the link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LinkMode {
    /// The transform is in z (1/W) for a user at fixed distance r₀; noise
    /// from `cfg` is included.
    FixedR0 { cfg: NetworkConfig, r0: f64 },
    /// The transform is already in the normalized argument and averaged
    /// over the service distance (interference-limited).
    ScenarioAveraged,
}

impl LinkMode {
    /// (argument scale, noise term): the SINR threshold t maps to the LT
    /// argument t·scale and the noise factor e^{−t·noise}.
    fn normalization(&self) -> Result<(f64, f64)> {
        match *self {
            Self::ScenarioAveraged => Ok((1.0, 0.0)),
            Self::FixedR0 { cfg, r0 } => {
                cfg.validate()?;
                if !(r0 > 0.0) {
                    return Err(domain(format!("service distance must be positive, got {r0}")));
                }
                let scale = r0.powf(cfg.eta) / cfg.power;
                Ok((scale, cfg.noise * scale))
            }
        }
    }
}

fn quad_spec() -> QuadratureSpec {
    QuadratureSpec::with_tolerances(1e-11, 1e-9)
}

/// Runs `f` while capturing the first error raised inside an integrand.
struct Capture(Option<Error>);

impl Capture {
    fn take(&mut self, r: Result<f64>) -> f64 {
        match r {
            Ok(v) => v,
            Err(e) => {
                self.0.get_or_insert(e);
                f64::NAN
            }
        }
    }

    fn finish(self, v: Result<f64>) -> Result<f64> {
        match self.0 {
            Some(e) => Err(e),
            None => v,
        }
    }
}

/// ∫₁^∞ e^{−z(1+u²)} ₁F₁(1−m; 2; z(1+u²)) du.
fn hamdi_inner(z: f64, m: u32) -> Result<f64> {
    if m == 1 {
        return Ok((-z).exp() * 0.5 * (PI / z).sqrt() * erfc(z.sqrt()));
    }
    let mut cap = Capture(None);
    let v = integrate_semi_infinite_scaled(
        |t| {
            let y = z * (1.0 + (1.0 + t) * (1.0 + t));
            let h = cap.take(hyp1f1(1.0 - m as f64, 2.0, y));
            (-y).exp() * h
        },
        0.0,
        // decay length in u: 1/√z for small z, 1/z for large z
        1.0 / (z.sqrt() * (1.0 + z.sqrt())),
        &QuadratureSpec::with_tolerances(1e-14, 1e-11),
    );
    cap.finish(v)
}

fn hamdi_with<F: Fn(f64) -> Result<f64>>(power: u8, m: u32, big_c: f64, lt_x: F) -> Result<f64> {
    if m == 0 {
        return Err(domain("gamma shape m must be ≥ 1"));
    }
    if !(big_c >= 0.0) {
        return Err(domain(format!("C must be ≥ 0, got {big_c}")));
    }
    if big_c.is_infinite() {
        return Ok(1.0);
    }
    let mf = m as f64;
    let scale = 1.0 / (1.0 + mf * big_c);
    let mut cap = Capture(None);
    let v = match power {
        1 => {
            let k = (ln_gamma(mf + 0.5) - ln_gamma(mf)).exp() * 2.0 / PI;
            integrate_semi_infinite_scaled(
                |z| {
                    if z == 0.0 {
                        return 0.0;
                    }
                    let poly = if m == 1 { 1.0 } else { cap.take(hyp1f1(1.0 - mf, 1.5, z)) };
                    let l = cap.take(lt_x(mf * z));
                    k * z.powf(-0.5) * (-z * (1.0 + mf * big_c)).exp() * poly * l
                },
                0.0,
                scale,
                &quad_spec(),
            )
        }
        2 => integrate_semi_infinite_scaled(
            |z| {
                if z == 0.0 {
                    return 0.0;
                }
                let inner = cap.take(hamdi_inner(z, m));
                let l = cap.take(lt_x(mf * z));
                4.0 * mf / PI * (-z * mf * big_c).exp() * l * inner
            },
            0.0,
            scale,
            &quad_spec(),
        ),
        _ => return Err(domain(format!("erfc power must be 1 or 2, got {power}"))),
    };
    Ok(1.0 - cap.finish(v)?)
}

/// E[erfc^c(√(Y/(X + C)))] for unit-mean Y ~ Gamma(m, 1/m), with X given
/// through its Laplace transform.
pub fn hamdi_expectation(power: u8, m: u32, big_c: f64, lt_x: &LaplaceTransform) -> Result<f64> {
    hamdi_with(power, m, big_c, |z| lt_x.evaluate(z))
}

/// ASEP with exact interferer symbols through the EiD representation,
/// Rayleigh fading on every link.
pub fn asep_eid(r0: f64, cfg: &NetworkConfig, constellation: &Constellation, scheme: &ModulationScheme) -> Result<f64> {
    cfg.validate()?;
    if !(r0 > 0.0) {
        return Err(domain(format!("service distance must be positive, got {r0}")));
    }
    let mut total = 0.0;
    for t in scheme.terms() {
        let big_c = cfg.noise * r0.powf(cfg.eta) / (cfg.power * t.beta);
        let e = hamdi_with(t.power, 1, big_c, |z| {
            lt_zeta(z / t.beta, cfg.lambda_bs, r0, cfg.eta, constellation)
        })?;
        total += t.weight * e;
    }
    Ok(total)
}

/// ASEP under the Gaussian-signaling approximation, Rayleigh fading.
pub fn asep_gaussian(scheme: &ModulationScheme, lt: &LaplaceTransform, mode: LinkMode) -> Result<f64> {
    asep_nakagami(scheme, 1, lt, mode)
}

/// ASEP with unit-mean Nakagami-m fading (integer m) on the useful link.
pub fn asep_nakagami(scheme: &ModulationScheme, m: u32, lt: &LaplaceTransform, mode: LinkMode) -> Result<f64> {
    let (scale, noise) = mode.normalization()?;
    let mut total = 0.0;
    for t in scheme.terms() {
        let e = hamdi_with(t.power, m, noise / t.beta, |z| lt.evaluate(z * scale / t.beta))?;
        total += t.weight * e;
    }
    Ok(total)
}

/// P{SINR < T} with Rayleigh fading on the useful link.
pub fn sinr_cdf(t: f64, lt: &LaplaceTransform, mode: LinkMode) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(domain(format!("SINR threshold must be ≥ 0, got {t}")));
    }
    let (scale, noise) = mode.normalization()?;
    let noise_factor = if noise == 0.0 { 1.0 } else { (-t * noise).exp() };
    Ok(1.0 - noise_factor * lt.evaluate(t * scale)?)
}

/// P{SINR < T} when the useful gain is Gamma(U, 1) (MRC over U antennas,
/// or Nakagami-U with the threshold pre-scaled by U):
/// 1 − Σ_{u<U} (−s)^u/u! · d^u/ds^u [e^{−sN} L(s)].
pub fn sinr_cdf_gamma(t: f64, shape: u32, lt: &LaplaceTransform, mode: LinkMode) -> Result<f64> {
    if shape == 0 {
        return Err(domain("gamma shape must be ≥ 1"));
    }
    if shape as usize > MAX_ORDER {
        return Err(Error::Unsupported(format!(
            "gamma shape {shape} exceeds the supported maximum {MAX_ORDER}"
        )));
    }
    if !(t >= 0.0) {
        return Err(domain(format!("SINR threshold must be ≥ 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let (scale, noise) = mode.normalization()?;
    let s = t * scale;
    let lw = |z: f64| -> Result<f64> {
        let n = if noise == 0.0 { 1.0 } else { (-z * noise / scale).exp() };
        Ok(n * lt.evaluate(z)?)
    };
    let mut sum = 0.0;
    let mut coef = 1.0; // (−s)^u / u!
    for u in 0..shape as usize {
        sum += coef * lt_derivative(lw, u, s)?;
        coef *= -s / (u as f64 + 1.0);
    }
    Ok(1.0 - sum)
}

/// [`sinr_cdf_gamma`] with the fixed-r₀ form averaged over the nearest-BS
/// distance density; `family(r₀)` yields the conditional transform in z.
pub fn sinr_cdf_gamma_averaged<F>(t: f64, shape: u32, family: F, cfg: &NetworkConfig) -> Result<f64>
where
    F: Fn(f64) -> Result<LaplaceTransform>,
{
    cfg.validate()?;
    let lam = cfg.lambda_bs;
    let mut cap = Capture(None);
    // in u = πλr² the nearest-distance density is e^{−u}
    let v = integrate_semi_infinite(
        |u| {
            if u == 0.0 {
                return 0.0;
            }
            let r0 = (u / (PI * lam)).sqrt();
            let f = family(r0).and_then(|lt| {
                sinr_cdf_gamma(t, shape, &lt, LinkMode::FixedR0 { cfg: *cfg, r0 })
            });
            cap.take(f) * (-u).exp()
        },
        0.0,
        &QuadratureSpec::with_tolerances(1e-10, 1e-8),
    );
    cap.finish(v)
}

/// Ergodic rate E ln(1 + SINR) in nats per channel use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateResult {
    pub value: f64,
    /// Set when the rate is unbounded (no interference and no noise).
    pub divergent: bool,
}

/// ∫₀^∞ (1 − F(t))/(1 + t) dt, computed in v = ln(1 + t).
pub fn ergodic_rate(lt: &LaplaceTransform, mode: LinkMode) -> Result<RateResult> {
    let survival = |t: f64| -> Result<f64> { Ok(1.0 - sinr_cdf(t, lt, mode)?) };
    // a rate integrand that has not decayed at t = 1e200 never will
    if survival(1e200)? > 1e-6 {
        return Ok(RateResult {
            value: f64::INFINITY,
            divergent: true,
        });
    }
    let mut cap = Capture(None);
    let v = integrate_semi_infinite(
        |v| {
            let t = v.exp_m1();
            // past the overflow point the survival is below the 1e200 check
            if t.is_finite() {
                cap.take(survival(t))
            } else {
                0.0
            }
        },
        0.0,
        &QuadratureSpec::with_tolerances(1e-10, 1e-9),
    );
    Ok(RateResult {
        value: cap.finish(v)?,
        divergent: false,
    })
}

/// SINR threshold at which the first SEP term alone reaches ε:
/// T = (erfc⁻¹(ε/w₁))²/β₁.
pub fn ber_outage_threshold(epsilon: f64, scheme: &ModulationScheme) -> Result<f64> {
    let first = scheme.terms()[0];
    if epsilon == first.weight {
        return Ok(0.0);
    }
    if !(epsilon > 0.0 && epsilon < first.weight) {
        return Err(domain(format!(
            "BER target must satisfy 0 < ε ≤ w₁ = {}, got {epsilon}",
            first.weight
        )));
    }
    let x = erfc_inv(epsilon / first.weight)?;
    Ok(x * x / first.beta)
}
