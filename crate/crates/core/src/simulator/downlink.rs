//! Downlink Poisson fields: raw baseband interference and per-link
//! SINR ingredients for every downlink scenario.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma, StandardNormal};
use rayon::prelude::*;

use super::empirical::{EmpiricalDistribution, MeanEstimate};
use super::rng::{stream, Stream};
use super::uplink::{uplink_link, UePlacement};
use super::{LinkSample, Scenario, SimulationPlan};
use crate::error::{Error, Result};
use crate::geometry::{sample_nearest_distance, sample_ordered_distances, sample_ppp_radii, truncation_radius, AnnularRegion, NetworkConfig, TierSet};
use crate::interference::SignalingMode;

/// Fraction of the mean interference power a raw field may leave out.
const FIELD_TAIL_FRACTION: f64 = 1e-4;

/// r^{−η}, exact for the common η = 4.
#[inline]
pub(crate) fn path_gain(r: f64, eta: f64) -> f64 {
    if eta == 4.0 {
        let r2 = r * r;
        1.0 / (r2 * r2)
    } else {
        r.powf(-eta)
    }
}

/// Default outer radius for SINR-type simulations: 30 mean inter-site
/// distances, and at least 20 r₀.
pub(crate) fn default_outer_radius(lambda: f64, r0: f64) -> f64 {
    (30.0 / (PI * lambda).sqrt()).max(20.0 * r0)
}

/// Mean interference power of all BSs beyond R (unit-mean fading).
pub(crate) fn tail_mean(lambda: f64, power: f64, eta: f64, radius: f64) -> f64 {
    2.0 * PI * lambda * power * radius.powf(2.0 - eta) / (eta - 2.0)
}

fn check_cfg(cfg: &NetworkConfig, plan: &SimulationPlan) -> Result<()> {
    cfg.validate()?;
    plan.validate()
}

fn fixed_r0(cfg: &NetworkConfig) -> Result<f64> {
    if cfg.exclusion_radius > 0.0 {
        Ok(cfg.exclusion_radius)
    } else {
        Err(Error::Validation("fixed-distance scenarios need a positive exclusion radius r0".into()))
    }
}

/// Sum of the complex baseband contributions √P s h r^{−η/2} of a PPP on
/// the annulus [r₀, R], one sample per realization.
pub fn simulate_downlink_field(cfg: &NetworkConfig, mode: &SignalingMode, r0: f64, plan: &SimulationPlan) -> Result<Vec<Complex64>> {
    check_cfg(cfg, plan)?;
    if !(r0 > 0.0) {
        return Err(Error::Domain(format!("exclusion radius must be positive, got {r0}")));
    }
    let outer = plan
        .outer_radius
        .unwrap_or_else(|| truncation_radius(cfg.lambda_bs, cfg.eta, r0, FIELD_TAIL_FRACTION));
    let region = AnnularRegion::new(r0, outer)?;
    let symbols = match mode {
        SignalingMode::Exact(c) => Some(c.symbols().to_vec()),
        SignalingMode::Gaussian => None,
    };
    let sqrt_p = cfg.power.sqrt();
    let half_eta = 0.5 * cfg.eta;
    Ok((0..plan.realizations)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(plan.seed, i as u64);
            let radii = sample_ppp_radii(cfg.lambda_bs, &region, &mut rng);
            let mut acc = Complex64::new(0.0, 0.0);
            for r in radii {
                let h = complex_normal(&mut rng);
                let s = match &symbols {
                    Some(alphabet) => alphabet[rng.random_range(0..alphabet.len())],
                    None => complex_normal(&mut rng),
                };
                let amp = if half_eta == 2.0 { 1.0 / (r * r) } else { r.powf(-half_eta) };
                acc += s * h * (sqrt_p * amp);
            }
            acc
        })
        .collect())
}

/// CN(0, 1).
#[inline]
pub(crate) fn complex_normal(rng: &mut Stream) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Distance to the nearest BS followed by all farther BSs out to R(r₀).
fn radii_with_serving(lambda: f64, plan: &SimulationPlan, rng: &mut Stream) -> (Vec<f64>, f64) {
    let r0 = sample_nearest_distance(lambda, rng);
    let outer = plan.outer_radius.unwrap_or_else(|| default_outer_radius(lambda, r0)).max(r0 * (1.0 + 1e-12));
    let mut radii = vec![r0];
    let region = AnnularRegion::new(r0, outer).expect("r0 < outer");
    radii.extend(sample_ppp_radii(lambda, &region, rng));
    (radii, outer)
}

fn exp1(rng: &mut Stream) -> f64 {
    Exp1.sample(rng)
}

fn realize(cfg: &NetworkConfig, plan: &SimulationPlan, rng: &mut Stream) -> Result<LinkSample> {
    let (lam, p, eta) = (cfg.lambda_bs, cfg.power, cfg.eta);
    let sample = match &plan.scenario {
        Scenario::FixedR0 | Scenario::Nakagami { .. } => {
            let r0 = fixed_r0(cfg)?;
            let outer = plan.outer_radius.unwrap_or_else(|| default_outer_radius(lam, r0));
            let radii = sample_ppp_radii(lam, &AnnularRegion::new(r0, outer)?, rng);
            let fading: Box<dyn Fn(&mut Stream) -> f64> = match plan.scenario {
                Scenario::Nakagami { m } => {
                    let g = Gamma::new(m as f64, 1.0 / m as f64).expect("valid gamma");
                    Box::new(move |r: &mut Stream| g.sample(r))
                }
                _ => Box::new(exp1),
            };
            let interference: f64 = radii.iter().map(|&r| p * fading(rng) * path_gain(r, eta)).sum::<f64>() + tail_mean(lam, p, eta, outer);
            LinkSample {
                signal: p * path_gain(r0, eta),
                gain: fading(rng),
                interference,
            }
        }
        Scenario::RandomR0 | Scenario::LoadAware { .. } | Scenario::Reuse { .. } | Scenario::Mrc { .. } => {
            let (radii, outer) = radii_with_serving(lam, plan, rng);
            let (keep, skip, gain) = match plan.scenario {
                Scenario::LoadAware { p } => (p, 0, None),
                Scenario::Reuse { delta } => (1.0 / delta as f64, delta - 1, None),
                Scenario::Mrc { antennas, delta } => (1.0 / delta as f64, delta - 1, Some(antennas)),
                _ => (1.0, 0, None),
            };
            let mut interference = 0.0;
            for &r in radii.iter().skip(1 + skip) {
                // the Bernoulli draw is always consumed so streams stay aligned
                let active = rng.random::<f64>() < keep;
                let h = exp1(rng);
                if active {
                    interference += p * h * path_gain(r, eta);
                }
            }
            interference += tail_mean(keep * lam, p, eta, outer);
            let g = match gain {
                Some(n) => Gamma::new(n as f64, 1.0).expect("valid gamma").sample(rng),
                None => exp1(rng),
            };
            LinkSample {
                signal: p * path_gain(radii[0], eta),
                gain: g,
                interference,
            }
        }
        Scenario::Comp { n } => {
            let near = sample_ordered_distances(lam, *n, rng);
            let last = near[n - 1];
            let outer = plan.outer_radius.unwrap_or_else(|| default_outer_radius(lam, last)).max(last * (1.0 + 1e-12));
            let far = sample_ppp_radii(lam, &AnnularRegion::new(last, outer)?, rng);
            let interference = far.iter().map(|&r| p * exp1(rng) * path_gain(r, eta)).sum::<f64>() + tail_mean(lam, p, eta, outer);
            LinkSample {
                signal: p * near.iter().map(|&r| path_gain(r, eta)).sum::<f64>(),
                gain: exp1(rng),
                interference,
            }
        }
        Scenario::Multitier(tiers) => realize_multitier(tiers, plan, rng)?,
        Scenario::Uplink { rho } => uplink_link(lam, *rho, eta, plan.outer_radius, UePlacement::UniformInCell, rng)?,
    };
    Ok(sample)
}

fn realize_multitier(tiers: &TierSet, plan: &SimulationPlan, rng: &mut Stream) -> Result<LinkSample> {
    let t = tiers.tiers();
    let lam_min = t.iter().map(|x| x.lambda).fold(f64::INFINITY, f64::min);
    let outer = plan.outer_radius.unwrap_or(30.0 / (PI * lam_min).sqrt());
    let region = AnnularRegion::new(0.0, outer)?;
    let fields: Vec<Vec<f64>> = t.iter().map(|x| sample_ppp_radii(x.lambda, &region, rng)).collect();
    // serving tier: largest biased received power B_k P_k r^{−η_k} among the nearest BSs
    let mut best: Option<(usize, f64)> = None;
    for (k, radii) in fields.iter().enumerate() {
        if let Some(&r) = radii.first() {
            let metric = t[k].bias * t[k].power * path_gain(r, t[k].eta);
            if best.is_none_or(|(_, m)| metric > m) {
                best = Some((k, metric));
            }
        }
    }
    let (k, _) = best.ok_or_else(|| Error::Validation("no BS inside the simulated region".into()))?;
    let mut interference = 0.0;
    for (l, radii) in fields.iter().enumerate() {
        for (j, &r) in radii.iter().enumerate() {
            let h = exp1(rng);
            if !(l == k && j == 0) {
                interference += t[l].power * h * path_gain(r, t[l].eta);
            }
        }
        interference += tail_mean(t[l].lambda, t[l].power, t[l].eta, outer);
    }
    Ok(LinkSample {
        signal: t[k].power * path_gain(fields[k][0], t[k].eta),
        gain: exp1(rng),
        interference,
    })
}

/// One [`LinkSample`] per realization, in realization order.
pub fn simulate_links(cfg: &NetworkConfig, plan: &SimulationPlan) -> Result<Vec<LinkSample>> {
    check_cfg(cfg, plan)?;
    (0..plan.realizations)
        .into_par_iter()
        .map(|i| realize(cfg, plan, &mut stream(plan.seed, i as u64)))
        .collect()
}

/// Empirical SINR distribution (noise from `cfg`).
pub fn simulate_sinr(cfg: &NetworkConfig, plan: &SimulationPlan) -> Result<EmpiricalDistribution> {
    let links = simulate_links(cfg, plan)?;
    EmpiricalDistribution::new(links.iter().map(|l| l.sinr(cfg.noise)).collect())
}

/// E exp{−a·I/S} for each a, with S the useful mean received power: the
/// Monte-Carlo counterpart of the normalized scenario transforms.
pub fn simulate_lt(cfg: &NetworkConfig, plan: &SimulationPlan, a: &[f64]) -> Result<Vec<MeanEstimate>> {
    let links = simulate_links(cfg, plan)?;
    Ok(a.iter()
        .map(|&a| MeanEstimate::from_samples(links.iter().map(|l| (-a * l.interference / l.signal).exp())))
        .collect())
}

/// E ln(1 + SINR).
pub fn simulate_rate(cfg: &NetworkConfig, plan: &SimulationPlan) -> Result<MeanEstimate> {
    let links = simulate_links(cfg, plan)?;
    Ok(MeanEstimate::from_samples(links.iter().map(|l| l.sinr(cfg.noise).ln_1p())))
}
