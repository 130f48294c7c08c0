//! Symbol-level link simulation with coherent minimum-distance detection.
//!
//! Given the interferer positions and symbols, Rayleigh-faded interference is
//! exactly CN(0, Σ P|s_k|² r_k^{−η}), so each symbol only needs one complex
//! Gaussian draw instead of a fresh sum over the field.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

use super::downlink::{complex_normal, default_outer_radius, path_gain, tail_mean};
use super::empirical::MeanEstimate;
use super::rng::stream;
use super::{Scenario, SimulationPlan};
use crate::error::{Error, Result};
use crate::geometry::{sample_nearest_distance, sample_ppp_radii, AnnularRegion, NetworkConfig};
use crate::interference::{Constellation, SignalingMode};

/// Symbol error rate estimate. The standard error is taken across
/// realizations, since symbols sharing one network realization are
/// correlated; with one symbol per realization it is the binomial one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SepEstimate {
    pub sep: f64,
    pub std_error: f64,
    pub symbols: u64,
    pub errors: u64,
}

impl SepEstimate {
    fn from_counts(counts: &[u64], per_realization: usize) -> Self {
        let k = per_realization as f64;
        let rates = MeanEstimate::from_samples(counts.iter().map(|&c| c as f64 / k));
        let errors: u64 = counts.iter().sum();
        let symbols = (counts.len() * per_realization) as u64;
        let std_error = if per_realization == 1 {
            (rates.mean * (1.0 - rates.mean) / symbols as f64).sqrt()
        } else {
            rates.std_error
        };
        Self {
            sep: errors as f64 / symbols as f64,
            std_error,
            symbols,
            errors,
        }
    }
}

/// Symbol error rate of `constellation` received in a Poisson field whose
/// interferers transmit according to `mode`. Supports [`Scenario::FixedR0`]
/// (serving BS at `cfg.exclusion_radius`) and [`Scenario::RandomR0`].
pub fn simulate_symbol_errors(
    cfg: &NetworkConfig,
    constellation: &Constellation,
    mode: &SignalingMode,
    plan: &SimulationPlan,
) -> Result<SepEstimate> {
    cfg.validate()?;
    plan.validate()?;
    let fixed = match plan.scenario {
        Scenario::FixedR0 => {
            if !(cfg.exclusion_radius > 0.0) {
                return Err(Error::Validation("fixed-distance symbol simulation needs r0 > 0".into()));
            }
            Some(cfg.exclusion_radius)
        }
        Scenario::RandomR0 => None,
        ref other => return Err(Error::Unsupported(format!("symbol simulation of {other:?}"))),
    };
    // energy levels of the interferers' alphabet; a single level lets the
    // per-interferer draw be skipped
    let levels: Option<Vec<f64>> = match mode {
        SignalingMode::Exact(c) => Some(c.symbols().iter().map(|s| s.norm_sqr()).collect()),
        SignalingMode::Gaussian => None,
    };
    let constant_energy = levels.as_ref().and_then(|l| {
        let first = l[0];
        l.iter().all(|&e| (e - first).abs() <= 1e-12).then_some(first)
    });
    let alphabet = constellation.symbols();
    let (lam, p, eta) = (cfg.lambda_bs, cfg.power, cfg.eta);

    let errors: Vec<u64> = (0..plan.realizations)
        .into_par_iter()
        .map(|i| -> Result<u64> {
            let mut rng = stream(plan.seed, i as u64);
            let r0 = fixed.unwrap_or_else(|| sample_nearest_distance(lam, &mut rng));
            let outer = plan.outer_radius.unwrap_or_else(|| default_outer_radius(lam, r0)).max(r0 * (1.0 + 1e-12));
            let radii = sample_ppp_radii(lam, &AnnularRegion::new(r0, outer)?, &mut rng);
            let mut variance = 0.0;
            for r in radii {
                let energy = match (constant_energy, &levels) {
                    (Some(e), _) => e,
                    (None, Some(l)) => l[rng.random_range(0..l.len())],
                    (None, None) => Exp1.sample(&mut rng),
                };
                variance += p * energy * path_gain(r, eta);
            }
            variance += tail_mean(lam, p, eta, outer) + cfg.noise;
            let sd = variance.sqrt();
            let amplitude = (p * path_gain(r0, eta)).sqrt();
            let mut count = 0;
            for _ in 0..plan.symbols_per_realization {
                let k = rng.random_range(0..alphabet.len());
                let g = complex_normal(&mut rng) * amplitude;
                let y = g * alphabet[k] + complex_normal(&mut rng) * sd;
                if detect(y / g, alphabet) != k {
                    count += 1;
                }
            }
            Ok(count)
        })
        .collect::<Result<_>>()?;
    Ok(SepEstimate::from_counts(&errors, plan.symbols_per_realization))
}

/// Index of the nearest constellation point.
fn detect(y: Complex64, alphabet: &[Complex64]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (j, s) in alphabet.iter().enumerate() {
        let d = (y - s).norm_sqr();
        if d < best_d {
            best = j;
            best_d = d;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{asep_gaussian, LinkMode, ModulationScheme};
    use crate::transforms::LaplaceTransform;

    #[test]
    fn detector_picks_nearest() {
        let c = Constellation::qam(4).unwrap();
        for (k, s) in c.symbols().iter().enumerate() {
            assert_eq!(detect(*s * 1.3, c.symbols()), k);
        }
    }

    #[test]
    fn noise_only_link_matches_rayleigh_qpsk() {
        // a vanishing network leaves Rayleigh fading in AWGN
        let cfg = NetworkConfig::new(1e-12, 1.0, 4.0, 0.1, 1.0).unwrap();
        let c = Constellation::qam(4).unwrap();
        let plan = SimulationPlan::new(Scenario::FixedR0, 4000, 7).with_symbols(20).with_outer_radius(2.0);
        let est = simulate_symbol_errors(&cfg, &c, &SignalingMode::Gaussian, &plan).unwrap();
        let exact = asep_gaussian(
            &ModulationScheme::qpsk(),
            &LaplaceTransform::no_interference(),
            LinkMode::FixedR0 { cfg, r0: 1.0 },
        )
        .unwrap();
        assert!((est.sep - exact).abs() < 4.0 * est.std_error, "{est:?} vs {exact}");
    }

    #[test]
    fn unsupported_scenario() {
        let cfg = NetworkConfig::new(1e-6, 1.0, 4.0, 0.0, 100.0).unwrap();
        let c = Constellation::bpsk();
        let plan = SimulationPlan::new(Scenario::Comp { n: 2 }, 10, 1);
        assert!(matches!(
            simulate_symbol_errors(&cfg, &c, &SignalingMode::Gaussian, &plan),
            Err(Error::Unsupported(_))
        ));
    }
}
