//! Laplace transforms L(z) = E e^{−zI} of the aggregate interference power
//! for each network scenario.
//!
//! Two argument conventions are used. The fixed-distance transforms
//! ([`lt_baseline`]) take z in 1/W. The scenario transforms take the
//! normalized argument a, where I is measured relative to the useful
//! received power, so that P{SIR < T} = 1 − L(T).

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{check_eta, domain, Error, Result};
use crate::geometry::{sample_ordered_distances, TierSet};
use crate::interference::{baseline_exponent, baseline_exponent_hypergeometric, Constellation};
use crate::numerics::quadrature::{integrate_semi_infinite, QuadratureSpec};
use crate::numerics::special::{hyp2f1, kummer_bracket, ln_gamma};
use crate::simulator::rng::stream;

/// Which formula a [`LaplaceTransform`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    NoInterference,
    Baseline,
    Generalized,
    RandomDistance,
    LoadAware,
    Multitier,
    FrequencyReuse,
    Uplink,
    Nakagami,
    Zeta,
    Custom,
}

type LtFn = dyn Fn(f64) -> Result<f64> + Send + Sync;

/// An evaluable z ↦ E e^{−zI} together with the scenario it came from.
#[derive(Clone)]
pub struct LaplaceTransform {
    scenario: Scenario,
    params: Vec<(&'static str, f64)>,
    f: Arc<LtFn>,
}

impl fmt::Debug for LaplaceTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LaplaceTransform")
            .field("scenario", &self.scenario)
            .field("params", &self.params)
            .finish()
    }
}

impl LaplaceTransform {
    pub fn new<F>(scenario: Scenario, params: Vec<(&'static str, f64)>, f: F) -> Self
    where
        F: Fn(f64) -> Result<f64> + Send + Sync + 'static,
    {
        Self {
            scenario,
            params,
            f: Arc::new(f),
        }
    }

    /// L(z); exactly 1 at z = 0.
    pub fn evaluate(&self, z: f64) -> Result<f64> {
        if !(z >= 0.0) {
            return Err(domain(format!("Laplace transforms are evaluated at z ≥ 0, got {z}")));
        }
        if z == 0.0 {
            return Ok(1.0);
        }
        (self.f)(z)
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    pub fn params(&self) -> &[(&'static str, f64)] {
        &self.params
    }

    /// L ≡ 1.
    pub fn no_interference() -> Self {
        Self::new(Scenario::NoInterference, vec![], |_| Ok(1.0))
    }

    pub fn baseline(lambda: f64, power: f64, eta: f64, r0: f64) -> Result<Self> {
        lt_baseline(0.0, lambda, power, eta, r0)?;
        Ok(Self::new(
            Scenario::Baseline,
            vec![("lambda", lambda), ("power", power), ("eta", eta), ("r0", r0)],
            move |z| lt_baseline(z, lambda, power, eta, r0),
        ))
    }

    pub fn generalized(lambda: f64, r0: f64, r_excl: f64, p0: f64, p_int: f64) -> Result<Self> {
        lt_generalized(0.0, lambda, r0, r_excl, p0, p_int)?;
        Ok(Self::new(
            Scenario::Generalized,
            vec![("lambda", lambda), ("r0", r0), ("r_excl", r_excl), ("p0", p0), ("p_int", p_int)],
            move |a| lt_generalized(a, lambda, r0, r_excl, p0, p_int),
        ))
    }

    pub fn random_distance() -> Self {
        Self::new(Scenario::RandomDistance, vec![], |a| Ok(lt_random_distance(a)))
    }

    pub fn load_aware(p: f64) -> Result<Self> {
        lt_load_aware(0.0, p)?;
        Ok(Self::new(Scenario::LoadAware, vec![("p", p)], move |a| lt_load_aware(a, p)))
    }

    pub fn multitier(tiers: TierSet, serving: ServingTier) -> Result<Self> {
        lt_multitier(0.0, &tiers, serving)?;
        let params = match serving {
            ServingTier::Tier(k) => vec![("tier", k as f64)],
            ServingTier::Averaged => vec![],
        };
        Ok(Self::new(Scenario::Multitier, params, move |a| lt_multitier(a, &tiers, serving)))
    }

    pub fn frequency_reuse(lambda: f64, delta: usize) -> Result<Self> {
        if delta == 0 {
            return Err(domain("reuse factor must be ≥ 1"));
        }
        Ok(Self::new(
            Scenario::FrequencyReuse,
            vec![("lambda", lambda), ("delta", delta as f64)],
            move |a| lt_frequency_reuse(a, lambda, delta),
        ))
    }

    pub fn uplink() -> Self {
        Self::new(Scenario::Uplink, vec![], |a| Ok(lt_uplink(a)))
    }

    pub fn nakagami(lambda: f64, r0: f64, r_excl: f64, m: u32, eta: f64, power_ratio: f64) -> Result<Self> {
        lt_nakagami(0.0, lambda, r0, r_excl, m, eta, power_ratio)?;
        Ok(Self::new(
            Scenario::Nakagami,
            vec![
                ("lambda", lambda),
                ("r0", r0),
                ("r_excl", r_excl),
                ("m", m as f64),
                ("eta", eta),
                ("power_ratio", power_ratio),
            ],
            move |a| lt_nakagami(a, lambda, r0, r_excl, m, eta, power_ratio),
        ))
    }

    pub fn zeta(lambda: f64, r0: f64, eta: f64, constellation: Constellation) -> Result<Self> {
        lt_zeta(0.0, lambda, r0, eta, &constellation)?;
        Ok(Self::new(
            Scenario::Zeta,
            vec![("lambda", lambda), ("r0", r0), ("eta", eta)],
            move |z| lt_zeta(z, lambda, r0, eta, &constellation),
        ))
    }

    /// The transform of I/c for a constant c > 0: z ↦ L(z/c).
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(domain(format!("scale must be positive, got {c}")));
        }
        let inner = self.clone();
        let mut params = self.params.clone();
        params.push(("scale", c));
        Ok(Self::new(self.scenario, params, move |z| inner.evaluate(z / c)))
    }
}

fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{name} must be finite and ≥ 0, got {v}")))
    }
}

fn check_pos(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{name} must be finite and > 0, got {v}")))
    }
}

/// √a·arctan√a, the single-tier interference exponent at η = 4.
fn rho(a: f64) -> f64 {
    let s = a.sqrt();
    s * s.atan()
}

/// Interference from a PPP of intensity λ outside r₀, every link with unit
/// exponential fading, received power P r^{−η}; evaluated at z (1/W).
/// Uses the arctan closed form at η = 4 and the ₂F₁ form otherwise.
pub fn lt_baseline(z: f64, lambda: f64, power: f64, eta: f64, r0: f64) -> Result<f64> {
    check_eta(eta)?;
    check_nonneg("z", z)?;
    check_nonneg("lambda", lambda)?;
    check_pos("power", power)?;
    check_pos("r0", r0)?;
    Ok(baseline_exponent(z, lambda, power, eta, r0)?.exp())
}

/// [`lt_baseline`] always through the ₂F₁ form, also at η = 4.
pub fn lt_baseline_hypergeometric(z: f64, lambda: f64, power: f64, eta: f64, r0: f64) -> Result<f64> {
    check_eta(eta)?;
    check_nonneg("z", z)?;
    check_pos("power", power)?;
    check_pos("r0", r0)?;
    if z == 0.0 {
        return Ok(1.0);
    }
    Ok(baseline_exponent_hypergeometric(z, lambda, power, eta, r0)?.exp())
}

/// η = 4 transform with serving power P₀ at r₀, interferers of power P_I
/// beyond r_excl.
pub fn lt_generalized(a: f64, lambda: f64, r0: f64, r_excl: f64, p0: f64, p_int: f64) -> Result<f64> {
    check_nonneg("a", a)?;
    check_nonneg("lambda", lambda)?;
    check_pos("r0", r0)?;
    check_pos("r_excl", r_excl)?;
    check_pos("p0", p0)?;
    check_nonneg("p_int", p_int)?;
    let s = (a * p_int / p0).sqrt();
    let q = r0 / r_excl;
    Ok((-PI * lambda * s * r0 * r0 * (q * q * s).atan()).exp())
}

/// Nearest-BS association averaged over r₀ (η = 4, no noise):
/// 1/(1 + √a·arctan√a). Independent of λ and P.
pub fn lt_random_distance(a: f64) -> f64 {
    1.0 / (1.0 + rho(a))
}

/// Interferers active with per-channel access probability p.
pub fn lt_load_aware(a: f64, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(domain(format!("access probability must lie in [0, 1], got {p}")));
    }
    check_nonneg("a", a)?;
    Ok(1.0 / (p * rho(a) + 1.0))
}

/// Which user population a multi-tier transform describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ServingTier {
    /// Users associated with tier k.
    Tier(usize),
    /// All users, weighted by the association probabilities.
    Averaged,
}

/// Biased-RSS multi-tier network with common η = 4.
pub fn lt_multitier(a: f64, tiers: &TierSet, serving: ServingTier) -> Result<f64> {
    if !tiers.all_eta4() {
        return Err(Error::Unsupported(
            "multi-tier transforms are implemented for a common path-loss exponent η = 4 only".into(),
        ));
    }
    check_nonneg("a", a)?;
    let t = tiers.tiers();
    let per_tier = |k: usize| -> f64 {
        let bk = t[k].bias;
        let num: f64 = t.iter().map(|l| (l.bias * l.power).sqrt() * l.lambda).sum();
        let den: f64 = t
            .iter()
            .map(|l| {
                let x = a * bk / l.bias;
                (l.bias * l.power).sqrt() * l.lambda * (1.0 + rho(x))
            })
            .sum();
        num / den
    };
    match serving {
        ServingTier::Tier(k) => {
            if k >= t.len() {
                return Err(domain(format!("tier index {k} out of range (have {})", t.len())));
            }
            Ok(per_tier(k))
        }
        ServingTier::Averaged => {
            let total: f64 = t.iter().map(|l| l.lambda * (l.bias * l.power).sqrt()).sum();
            Ok((0..t.len())
                .map(|k| t[k].lambda * (t[k].bias * t[k].power).sqrt() / total * per_tier(k))
                .sum())
        }
    }
}

/// Coordinated frequency reuse with factor Δ: the Δ−1 BSs nearest to the
/// user leave its sub-band free, every other BS uses it with probability
/// 1/Δ. Independent of λ.
pub fn lt_frequency_reuse(a: f64, lambda: f64, delta: usize) -> Result<f64> {
    check_nonneg("a", a)?;
    check_pos("lambda", lambda)?;
    match delta {
        0 => Err(domain("reuse factor must be ≥ 1")),
        1 => Ok(lt_random_distance(a)),
        _ => reuse_double_integral(a, delta),
    }
}

/// ∫∫ w^{n−1}/Γ(n) e^{−u−w} exp{−(u/Δ)√a·arctan(√a·u/(u+w))} dw du with
/// n = Δ − 1, where u = πλr₀² and u + w = πλr²_{Δ−1}.
fn reuse_double_integral(a: f64, delta: usize) -> Result<f64> {
    let n = (delta - 1) as f64;
    let d = delta as f64;
    let sa = a.sqrt();
    let lg = ln_gamma(n);
    let inner_spec = QuadratureSpec::with_tolerances(1e-13, 1e-11);
    let outer_spec = QuadratureSpec::with_tolerances(1e-11, 1e-10);
    let mut failure = None;
    let value = integrate_semi_infinite(
        |u| {
            let inner = integrate_semi_infinite(
                |w| {
                    let dens = if n == 1.0 { (-w).exp() } else { ((n - 1.0) * w.ln() - w - lg).exp() };
                    dens * (-(u / d) * sa * (sa * u / (u + w)).atan()).exp()
                },
                0.0,
                &inner_spec,
            );
            match inner {
                Ok(v) => (-u).exp() * v,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            }
        },
        0.0,
        &outer_spec,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    value
}

/// Uplink with full channel inversion to level ρ (η = 4):
/// exp{−√a·arctan√a}, free of ρ and λ.
pub fn lt_uplink(a: f64) -> f64 {
    (-rho(a)).exp()
}

/// The uplink transform before E√P_I is substituted:
/// exp{−πλ E√P_I √(a/ρ) arctan√a}.
pub fn lt_uplink_intermediate(a: f64, lambda: f64, rho_level: f64, mean_sqrt_power: f64) -> Result<f64> {
    check_nonneg("a", a)?;
    check_pos("rho", rho_level)?;
    Ok((-PI * lambda * mean_sqrt_power * (a / rho_level).sqrt() * a.sqrt().atan()).exp())
}

/// E√P_I = √ρ/(πλ) for inverted powers ρr⁴ with Rayleigh-distributed r.
pub fn uplink_mean_sqrt_power(rho_level: f64, lambda: f64) -> f64 {
    rho_level.sqrt() / (PI * lambda)
}

/// Interferers with Nakagami-m (unit-mean Gamma(m, 1/m)) power fading.
pub fn lt_nakagami(a: f64, lambda: f64, r0: f64, r_excl: f64, m: u32, eta: f64, power_ratio: f64) -> Result<f64> {
    check_eta(eta)?;
    check_nonneg("a", a)?;
    check_nonneg("lambda", lambda)?;
    check_pos("r0", r0)?;
    check_pos("r_excl", r_excl)?;
    check_nonneg("power_ratio", power_ratio)?;
    if m == 0 {
        return Err(Error::Unsupported("Nakagami shape m must be a positive integer".into()));
    }
    if a == 0.0 {
        return Ok(1.0);
    }
    let d = 2.0 / eta;
    let mf = m as f64;
    let x = (r0 / r_excl).powf(eta) * a * power_ratio / mf;
    let f = hyp2f1(-d, mf, 1.0 - d, -x)?;
    Ok((-PI * lambda * r_excl * r_excl * (f - 1.0)).exp())
}

/// Transform of the normalized EiD scale ζ = I r₀^η/P with exact symbols:
/// exp{πλr₀²(1 − E ₁F₁(−2/η; 1−2/η; −z|s|²))}.
pub fn lt_zeta(z: f64, lambda: f64, r0: f64, eta: f64, constellation: &Constellation) -> Result<f64> {
    check_eta(eta)?;
    check_nonneg("z", z)?;
    check_nonneg("lambda", lambda)?;
    check_pos("r0", r0)?;
    let mut acc = 0.0;
    for (energy, weight) in constellation.energy_levels() {
        acc += weight * kummer_bracket(z * energy, eta)?;
    }
    Ok((PI * lambda * r0 * r0 * acc).exp())
}

/// Monte-Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub std_error: f64,
}

const MIMO_CHUNK: usize = 4096;

/// Non-coherent joint transmission from the n nearest BSs (η = 4),
/// averaged over their ordered distances by Monte-Carlo. Deterministic in
/// (seed, mc_samples) regardless of the thread count.
pub fn lt_network_mimo(a: f64, lambda: f64, n: usize, mc_samples: usize, seed: u64) -> Result<McEstimate> {
    check_nonneg("a", a)?;
    check_pos("lambda", lambda)?;
    if n == 0 {
        return Err(domain("network MIMO needs n ≥ 1 cooperating BSs"));
    }
    if mc_samples < 1000 {
        return Err(Error::Validation(format!(
            "network-MIMO transform needs at least 1000 samples, got {mc_samples}"
        )));
    }
    let chunks = mc_samples.div_ceil(MIMO_CHUNK);
    let partial: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream(seed, c as u64);
            let count = MIMO_CHUNK.min(mc_samples - c * MIMO_CHUNK);
            let mut s = 0.0;
            let mut s2 = 0.0;
            for _ in 0..count {
                let r = sample_ordered_distances(lambda, n, &mut rng);
                let sum_inv: f64 = r.iter().map(|x| x.powi(-4)).sum();
                let g = (a / sum_inv).sqrt();
                let last = r[n - 1];
                let v = (-PI * lambda * g * (g / (last * last)).atan()).exp();
                s += v;
                s2 += v * v;
            }
            (s, s2)
        })
        .collect();
    let (s, s2) = partial.iter().fold((0.0, 0.0), |acc, p| (acc.0 + p.0, acc.1 + p.1));
    let nf = mc_samples as f64;
    let mean = s / nf;
    let var = ((s2 / nf - mean * mean) * nf / (nf - 1.0)).max(0.0);
    Ok(McEstimate {
        value: mean,
        std_error: (var / nf).sqrt(),
    })
}

/// λ′ = λ·E{x^{2/η}}: shadowing x on every link is equivalent to scaling
/// the BS intensity.
pub fn effective_intensity_shadowing(lambda: f64, eta: f64, shadowing_fractional_moment: f64) -> Result<f64> {
    check_eta(eta)?;
    check_pos("shadowing moment", shadowing_fractional_moment)?;
    Ok(lambda * shadowing_fractional_moment)
}

/// E{x^{2/η}} for lognormal shadowing with standard deviation σ in dB.
pub fn lognormal_fractional_moment(sigma_db: f64, eta: f64) -> Result<f64> {
    check_eta(eta)?;
    check_nonneg("sigma_db", sigma_db)?;
    let sigma_n = sigma_db * std::f64::consts::LN_10 / 10.0;
    let d = 2.0 / eta;
    Ok((0.5 * d * d * sigma_n * sigma_n).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Tier;
    use approx::assert_relative_eq;

    fn two_tiers(b2: f64) -> TierSet {
        TierSet::new(vec![
            Tier {
                lambda: 1e-6,
                power: 50.0,
                bias: 1.0,
                eta: 4.0,
            },
            Tier {
                lambda: 2e-6,
                power: 1.0,
                bias: b2,
                eta: 4.0,
            },
        ])
        .unwrap()
    }

    #[test]
    fn baseline_values() {
        assert_eq!(lt_baseline(0.0, 1e-6, 10.0, 4.0, 100.0).unwrap(), 1.0);
        let v = lt_baseline(1e7, 1e-6, 10.0, 4.0, 100.0).unwrap();
        assert_relative_eq!(v, (-PI * PI * 1e-2 / 4.0).exp(), max_relative = 1e-12);
        assert_relative_eq!(v, 0.97563, max_relative = 1e-5);
        assert!(lt_baseline(1.0, 1e-6, 10.0, 2.0, 100.0).is_err());
    }

    #[test]
    fn baseline_paths_agree() {
        for i in 0..20 {
            let z = 10f64.powf(4.0 + 0.3 * i as f64);
            let a = lt_baseline(z, 1e-6, 10.0, 4.0, 100.0).unwrap();
            let b = lt_baseline_hypergeometric(z, 1e-6, 10.0, 4.0, 100.0).unwrap();
            assert!((a - b).abs() < 1e-10, "z = {z}: {a} vs {b}");
        }
    }

    #[test]
    fn baseline_derivative_matches_closed_form() {
        let (lam, p, r0) = (1e-6, 10.0, 100.0);
        let z = 1e7;
        let d = crate::numerics::lt_derivative(|z| lt_baseline(z, lam, p, 4.0, r0), 1, z).unwrap();
        // d/dz of −πλ√(zP)·arctan(√(zP)/r₀²)
        let s = (z * p).sqrt();
        let dexp = -PI * lam * (0.5 * p / s * (s / (r0 * r0)).atan() + s * (0.5 * p / s / (r0 * r0)) / (1.0 + (s / (r0 * r0)).powi(2)));
        let exact = dexp * lt_baseline(z, lam, p, 4.0, r0).unwrap();
        assert_relative_eq!(d, exact, max_relative = 1e-6);
    }

    #[test]
    fn generalized_substitution() {
        let (lam, r0, p0) = (3e-6, 150.0, 7.0);
        for &a in &[0.0, 0.1, 1.0, 10.0] {
            let g = lt_generalized(a, lam, r0, r0, p0, p0).unwrap();
            let b = lt_baseline(a * r0.powi(4) / p0, lam, p0, 4.0, r0).unwrap();
            assert_relative_eq!(g, b, max_relative = 1e-12);
        }
        assert_relative_eq!(lt_generalized(1.0, lam, r0, 1e12, p0, p0).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn closed_forms() {
        assert_eq!(lt_random_distance(0.0), 1.0);
        assert_relative_eq!(lt_random_distance(1.0), 1.0 / (1.0 + PI / 4.0), max_relative = 1e-15);
        assert_relative_eq!(lt_random_distance(1.0), 0.56010, max_relative = 1e-4);
        assert_eq!(lt_load_aware(3.0, 0.0).unwrap(), 1.0);
        assert_relative_eq!(lt_load_aware(1.0, 0.5).unwrap(), 0.71803, max_relative = 1e-4);
        assert!(lt_load_aware(1.0, 1.5).is_err());
        assert_relative_eq!(lt_uplink(1.0), (-PI / 4.0).exp(), max_relative = 1e-15);
        assert_relative_eq!(lt_uplink(1.0), 0.45594, max_relative = 1e-4);
    }

    #[test]
    fn uplink_intermediate_reduces() {
        for &(rho_level, lam) in &[(1e-6, 1e-6), (1e-3, 5e-6)] {
            let m = uplink_mean_sqrt_power(rho_level, lam);
            let v = lt_uplink_intermediate(2.0, lam, rho_level, m).unwrap();
            assert_relative_eq!(v, lt_uplink(2.0), max_relative = 1e-14);
        }
    }

    #[test]
    fn multitier_reductions() {
        let equal = two_tiers(1.0);
        for &a in &[0.0, 0.3, 1.0, 7.0] {
            let v = lt_multitier(a, &equal, ServingTier::Averaged).unwrap();
            assert_relative_eq!(v, lt_random_distance(a), max_relative = 1e-12);
            for k in 0..2 {
                let v = lt_multitier(a, &equal, ServingTier::Tier(k)).unwrap();
                assert_relative_eq!(v, lt_random_distance(a), max_relative = 1e-12);
            }
        }
        let biased = two_tiers(10.0);
        assert!(lt_multitier(1.0, &biased, ServingTier::Averaged).unwrap() < lt_random_distance(1.0));
        let mixed = TierSet::new(vec![
            Tier {
                lambda: 1e-6,
                power: 1.0,
                bias: 1.0,
                eta: 4.0,
            },
            Tier {
                lambda: 1e-6,
                power: 1.0,
                bias: 1.0,
                eta: 3.0,
            },
        ])
        .unwrap();
        assert!(matches!(lt_multitier(1.0, &mixed, ServingTier::Averaged), Err(Error::Unsupported(_))));
    }

    #[test]
    fn reuse_is_lambda_free_and_increasing() {
        let a = 1.0;
        let l1 = lt_frequency_reuse(a, 1e-6, 1).unwrap();
        assert_eq!(l1, lt_random_distance(a));
        let l2 = lt_frequency_reuse(a, 1e-6, 2).unwrap();
        let l2b = lt_frequency_reuse(a, 7e-5, 2).unwrap();
        assert_eq!(l2, l2b);
        let l3 = lt_frequency_reuse(a, 1e-6, 3).unwrap();
        let l5 = lt_frequency_reuse(a, 1e-6, 5).unwrap();
        assert!(l1 < l2 && l2 < l3 && l3 < l5, "{l1} {l2} {l3} {l5}");
        assert_eq!(lt_frequency_reuse(0.0, 1e-6, 3).unwrap(), 1.0);
    }

    #[test]
    fn reuse_inner_density_normalized() {
        // a = 0 inside the integrand leaves ∫∫ density = 1
        let v = reuse_double_integral(0.0, 4).unwrap();
        assert_relative_eq!(v, 1.0, max_relative = 1e-9);
    }

    #[test]
    fn nakagami_reductions() {
        let mut state = 12345u64;
        let mut uniform = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..20 {
            let a = 10f64.powf(-2.0 + 4.0 * uniform());
            let lam = 1e-6 * (0.1 + 10.0 * uniform());
            let r0 = 50.0 + 500.0 * uniform();
            let n = lt_nakagami(a, lam, r0, r0, 1, 4.0, 1.0).unwrap();
            let p = 10.0;
            let b = lt_baseline(a * r0.powi(4) / p, lam, p, 4.0, r0).unwrap();
            assert_relative_eq!(n, b, max_relative = 1e-9);
        }
        assert_eq!(lt_nakagami(0.0, 1e-6, 100.0, 100.0, 3, 4.0, 1.0).unwrap(), 1.0);
        assert!(lt_nakagami(1.0, 1e-6, 100.0, 100.0, 0, 4.0, 1.0).is_err());
        // less variable fading at equal mean power lowers the LT (Jensen)
        let l1 = lt_nakagami(1.0, 1e-5, 100.0, 100.0, 1, 3.5, 1.0).unwrap();
        let l4 = lt_nakagami(1.0, 1e-5, 100.0, 100.0, 4, 3.5, 1.0).unwrap();
        assert!(l4 < l1);
    }

    #[test]
    fn zeta_transform() {
        let q4 = Constellation::qam(4).unwrap();
        assert_eq!(lt_zeta(0.0, 1e-6, 250.0, 4.0, &q4).unwrap(), 1.0);
        assert_relative_eq!(lt_zeta(5.0, 0.0, 250.0, 4.0, &q4).unwrap(), 1.0, epsilon = 0.0);
        let z = 0.7;
        let direct = (PI * 1e-6 * 250.0 * 250.0 * (1.0 - crate::numerics::special::hyp1f1(-0.5, 0.5, -z).unwrap())).exp();
        assert_relative_eq!(lt_zeta(z, 1e-6, 250.0, 4.0, &q4).unwrap(), direct, max_relative = 1e-12);
        // Gaussian symbols: the bracket averaged over a unit-exponential energy,
        // i.e. the baseline transform at z·r₀⁴/P (reference from an independent quadrature)
        let gauss = lt_baseline(250f64.powi(4) / 10.0, 1e-6, 10.0, 4.0, 250.0).unwrap();
        assert_relative_eq!(gauss.ln(), -0.154212568767021, max_relative = 1e-10);
        // −bracket is concave, so by Jensen constant-envelope symbols give the larger |ln L|
        for i in 1..30 {
            let z = 0.2 * i as f64;
            let exact = lt_zeta(z, 1e-6, 250.0, 4.0, &q4).unwrap();
            let gauss = lt_baseline(z * 250f64.powi(4) / 10.0, 1e-6, 10.0, 4.0, 250.0).unwrap();
            assert!(exact.ln().abs() >= gauss.ln().abs() * (1.0 - 1e-12));
        }
    }

    #[test]
    fn network_mimo() {
        let one = lt_network_mimo(1.0, 1e-6, 1, 40_000, 7).unwrap();
        assert!((one.value - lt_random_distance(1.0)).abs() < 3.0 * one.std_error);
        let two = lt_network_mimo(1.0, 1e-6, 2, 40_000, 7).unwrap();
        assert!(two.value > one.value);
        assert_eq!(lt_network_mimo(0.0, 1e-6, 3, 1000, 1).unwrap().value, 1.0);
        assert!(lt_network_mimo(1.0, 1e-6, 2, 999, 1).is_err());
        assert_eq!(lt_network_mimo(1.0, 1e-6, 2, 10_000, 3).unwrap(), lt_network_mimo(1.0, 1e-6, 2, 10_000, 3).unwrap());
    }

    #[test]
    fn shadowing() {
        assert_eq!(effective_intensity_shadowing(1e-6, 4.0, 1.0).unwrap(), 1e-6);
        let m = lognormal_fractional_moment(8.0, 4.0).unwrap();
        assert_relative_eq!(m, 1.529, max_relative = 1e-3);
        assert_eq!(
            effective_intensity_shadowing(1e-6, 4.0, 2.0 * m).unwrap(),
            2.0 * effective_intensity_shadowing(1e-6, 4.0, m).unwrap()
        );
    }

    #[test]
    fn every_transform_is_a_transform() {
        let lts = vec![
            LaplaceTransform::no_interference(),
            LaplaceTransform::baseline(1e-6, 10.0, 4.0, 250.0).unwrap().scaled(250f64.powi(4) / 10.0).unwrap(),
            LaplaceTransform::baseline(1e-6, 10.0, 3.3, 250.0).unwrap().scaled(250f64.powf(3.3) / 10.0).unwrap(),
            LaplaceTransform::generalized(1e-6, 200.0, 300.0, 10.0, 5.0).unwrap(),
            LaplaceTransform::random_distance(),
            LaplaceTransform::load_aware(0.4).unwrap(),
            LaplaceTransform::multitier(two_tiers(10.0), ServingTier::Averaged).unwrap(),
            LaplaceTransform::frequency_reuse(1e-6, 3).unwrap(),
            LaplaceTransform::uplink(),
            LaplaceTransform::nakagami(1e-6, 200.0, 200.0, 2, 4.0, 1.0).unwrap(),
            LaplaceTransform::zeta(1e-6, 250.0, 4.0, Constellation::qam(16).unwrap()).unwrap(),
        ];
        let grid: Vec<f64> = (0..50).map(|i| 10f64.powf(-3.0 + 6.0 * i as f64 / 49.0)).collect();
        for lt in &lts {
            assert_eq!(lt.evaluate(0.0).unwrap(), 1.0, "{lt:?}");
            let v: Vec<f64> = grid.iter().map(|&z| lt.evaluate(z).unwrap()).collect();
            assert!(v.iter().all(|x| (0.0..=1.0).contains(x)), "{lt:?}");
            assert!(v.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{lt:?}");
        }
        assert!(LaplaceTransform::uplink().evaluate(-1.0).is_err());
    }
}
