//! Poisson point processes and the spatial distributions of cellular
//! networks: link distances, cell load, and multi-tier association.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Exp1, Poisson};

use crate::error::{check_eta, domain, Error, Result};
use crate::numerics::quadrature::{integrate_semi_infinite_scaled, QuadratureSpec};
use crate::numerics::special::ln_gamma;

/// Conversion factor from BS/km² to BS/m².
pub const PER_KM2: f64 = 1e-6;

/// Shape constant of the gamma fit to the normalized Voronoi cell area.
pub const VORONOI_SHAPE: f64 = 3.575;

/// Single-tier network parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkConfig {
    /// BS intensity λ (per m²).
    pub lambda_bs: f64,
    /// BS transmit power P (W).
    pub power: f64,
    /// Path-loss exponent η.
    pub eta: f64,
    /// Noise power N₀ (W).
    pub noise: f64,
    /// Service distance r₀ used by fixed-distance analysis (m).
    pub exclusion_radius: f64,
}

impl NetworkConfig {
    pub fn new(lambda_bs: f64, power: f64, eta: f64, noise: f64, exclusion_radius: f64) -> Result<Self> {
        let cfg = Self {
            lambda_bs,
            power,
            eta,
            noise,
            exclusion_radius,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Noise-free network with r₀ left at zero.
    pub fn interference_limited(lambda_bs: f64, power: f64, eta: f64) -> Result<Self> {
        Self::new(lambda_bs, power, eta, 0.0, 0.0)
    }

    pub fn with_exclusion_radius(mut self, r0: f64) -> Result<Self> {
        self.exclusion_radius = r0;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        check_eta(self.eta)?;
        if !(self.lambda_bs > 0.0 && self.lambda_bs.is_finite()) {
            return Err(domain(format!("lambda_bs must be positive, got {}", self.lambda_bs)));
        }
        if !(self.power > 0.0 && self.power.is_finite()) {
            return Err(domain(format!("power must be positive, got {}", self.power)));
        }
        if !(self.noise >= 0.0 && self.noise.is_finite()) {
            return Err(domain(format!("noise must be nonnegative, got {}", self.noise)));
        }
        if !(self.exclusion_radius >= 0.0 && self.exclusion_radius.is_finite()) {
            return Err(domain(format!(
                "exclusion radius must be nonnegative, got {}",
                self.exclusion_radius
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Annulus inner ≤ |p| < outer centred on the receiver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnularRegion {
    pub inner_radius: f64,
    pub outer_radius: f64,
}

impl AnnularRegion {
    pub fn new(inner_radius: f64, outer_radius: f64) -> Result<Self> {
        if !(inner_radius >= 0.0 && inner_radius < outer_radius && outer_radius.is_finite()) {
            return Err(domain(format!(
                "annulus needs 0 ≤ inner < outer < ∞, got [{inner_radius}, {outer_radius}]"
            )));
        }
        Ok(Self {
            inner_radius,
            outer_radius,
        })
    }

    pub fn area(&self) -> f64 {
        PI * (self.outer_radius * self.outer_radius - self.inner_radius * self.inner_radius)
    }
}

/// Radius beyond which the neglected mean interference
/// 2πλP R^{2−η}/(η−2) is `tail_fraction` of the total 2πλP r₀^{2−η}/(η−2),
/// and at least 30 mean inter-site distances.
pub fn truncation_radius(lambda: f64, eta: f64, r0: f64, tail_fraction: f64) -> f64 {
    let base = 30.0 / (PI * lambda).sqrt();
    if r0 <= 0.0 {
        return base;
    }
    base.max(r0 * tail_fraction.powf(-1.0 / (eta - 2.0)))
}

/// Homogeneous PPP of the given intensity on an annulus.
pub fn sample_ppp<R: Rng + ?Sized>(intensity: f64, region: &AnnularRegion, rng: &mut R) -> Vec<Point> {
    let mean = intensity * region.area();
    if !(mean > 0.0) {
        return Vec::new();
    }
    let count = Poisson::new(mean).expect("positive finite mean").sample(rng) as usize;
    let r_in2 = region.inner_radius * region.inner_radius;
    let span = region.outer_radius * region.outer_radius - r_in2;
    (0..count)
        .map(|_| {
            let r = (r_in2 + rng.random::<f64>() * span).sqrt();
            let theta = 2.0 * PI * rng.random::<f64>();
            Point::new(r * theta.cos(), r * theta.sin())
        })
        .collect()
}

/// Ascending distances of all PPP points with inner ≤ r < outer, generated
/// sequentially from unit-rate arrivals of πλr².
pub fn sample_ppp_radii<R: Rng + ?Sized>(lambda: f64, region: &AnnularRegion, rng: &mut R) -> Vec<f64> {
    let mut out = Vec::new();
    if !(lambda > 0.0) {
        return out;
    }
    let scale = PI * lambda;
    let mut s = scale * region.inner_radius * region.inner_radius;
    let end = scale * region.outer_radius * region.outer_radius;
    loop {
        let e: f64 = Exp1.sample(rng);
        s += e;
        if s >= end {
            return out;
        }
        out.push((s / scale).sqrt());
    }
}

/// Density 2πλr e^{−πλr²} of the distance to the nearest PPP point.
pub fn nearest_distance_pdf(lambda: f64, r: f64) -> f64 {
    if r < 0.0 {
        return 0.0;
    }
    2.0 * PI * lambda * r * (-PI * lambda * r * r).exp()
}

pub fn nearest_distance_cdf(lambda: f64, r: f64) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    -(-PI * lambda * r * r).exp_m1()
}

/// Inverse-CDF sample of the nearest-point distance.
pub fn sample_nearest_distance<R: Rng + ?Sized>(lambda: f64, rng: &mut R) -> f64 {
    let e: f64 = Exp1.sample(rng);
    (e / (PI * lambda)).sqrt()
}

/// Joint density of the nearest distance x and the distance y to the n-th
/// next point (nearest indexed 0):
/// 4(πλ)^{n+1} x y (y² − x²)^{n−1} e^{−πλy²} / Γ(n).
pub fn joint_nearest_nth_pdf(lambda: f64, n: usize, x: f64, y: f64) -> Result<f64> {
    if n == 0 {
        return Err(domain("joint density needs n ≥ 1"));
    }
    if !(0.0 <= x && x <= y) {
        return Err(domain(format!("joint density needs 0 ≤ x ≤ y, got x = {x}, y = {y}")));
    }
    let pl = PI * lambda;
    let nf = n as f64;
    let gap = y * y - x * x;
    if gap == 0.0 && n > 1 {
        return Ok(0.0);
    }
    let spread = if n == 1 { 0.0 } else { (nf - 1.0) * gap.ln() };
    let log = (nf + 1.0) * pl.ln() + spread - pl * y * y - ln_gamma(nf);
    Ok(4.0 * x * y * log.exp())
}

/// The n smallest distances of a PPP to the origin, strictly ascending.
pub fn sample_ordered_distances<R: Rng + ?Sized>(lambda: f64, n: usize, rng: &mut R) -> Vec<f64> {
    let scale = PI * lambda;
    let mut s = 0.0;
    (0..n)
        .map(|_| {
            let e: f64 = Exp1.sample(rng);
            s += e;
            (s / scale).sqrt()
        })
        .collect()
}

/// Gamma-fit density of the area v of a typical Voronoi cell.
pub fn voronoi_area_pdf(lambda_bs: f64, v: f64) -> f64 {
    if v <= 0.0 {
        return 0.0;
    }
    let c = VORONOI_SHAPE;
    let log = c * (c * lambda_bs).ln() + (c - 1.0) * v.ln() - c * lambda_bs * v - ln_gamma(c);
    log.exp()
}

/// P(U = n) for the number of users in a typical cell, obtained by mixing a
/// Poisson count over [`voronoi_area_pdf`].
pub fn cell_load_pmf(lambda_bs: f64, lambda_ue: f64, n: usize) -> f64 {
    if lambda_ue <= 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    let c = VORONOI_SHAPE;
    let nf = n as f64;
    let bc = lambda_bs * c;
    let log = ln_gamma(nf + c) - ln_gamma(nf + 1.0) - ln_gamma(c) + nf * lambda_ue.ln() + c * bc.ln()
        - (nf + c) * (bc + lambda_ue).ln();
    log.exp()
}

/// Probability that a given channel of a BS with `num_channels` channels is
/// in use: Σ_k P(U = k)·min(k, N)/N.
pub fn channel_access_probability(lambda_bs: f64, lambda_ue: f64, num_channels: usize) -> Result<f64> {
    if num_channels == 0 {
        return Err(domain("a BS needs at least one channel"));
    }
    if !(lambda_bs > 0.0) || lambda_ue < 0.0 {
        return Err(domain("intensities must be positive"));
    }
    let n = num_channels as f64;
    let mut below = 0.0;
    let mut partial = 0.0;
    for k in 0..num_channels {
        let p = cell_load_pmf(lambda_bs, lambda_ue, k);
        below += p;
        partial += p * k as f64 / n;
    }
    Ok((partial + (1.0 - below)).clamp(0.0, 1.0))
}

/// One tier of a heterogeneous network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tier {
    pub lambda: f64,
    pub power: f64,
    pub bias: f64,
    pub eta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TierSet {
    tiers: Vec<Tier>,
}

impl TierSet {
    pub fn new(tiers: Vec<Tier>) -> Result<Self> {
        if tiers.is_empty() {
            return Err(domain("a tier set needs at least one tier"));
        }
        for (i, t) in tiers.iter().enumerate() {
            if !(t.lambda > 0.0 && t.power > 0.0 && t.bias > 0.0) {
                return Err(domain(format!(
                    "tier {i}: intensity, power and bias must be positive ({t:?})"
                )));
            }
            check_eta(t.eta)?;
        }
        Ok(Self { tiers })
    }

    pub fn tiers(&self) -> &[Tier] {
        &self.tiers
    }

    pub fn len(&self) -> usize {
        self.tiers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiers.is_empty()
    }

    pub fn all_eta4(&self) -> bool {
        self.tiers.iter().all(|t| t.eta == 4.0)
    }

    fn get(&self, k: usize) -> Result<&Tier> {
        self.tiers
            .get(k)
            .ok_or_else(|| domain(format!("tier index {k} out of range (have {})", self.tiers.len())))
    }

    /// π Σ_l λ_l (B_lP_l/(B_kP_k))^{2/η_l} x^{2η_k/η_l}: the void exponent
    /// seen by a user served by tier k at distance x.
    fn void_exponent(&self, k: usize, x: f64) -> f64 {
        let tk = self.tiers[k];
        self.tiers
            .iter()
            .map(|t| {
                let ratio = (t.bias * t.power) / (tk.bias * tk.power);
                t.lambda * ratio.powf(2.0 / t.eta) * x.powf(2.0 * tk.eta / t.eta)
            })
            .sum::<f64>()
            * PI
    }

    /// Σ_l λ_l √(B_lP_l/(B_kP_k)) — the effective intensity seen from tier k
    /// when every tier has η = 4.
    fn effective_intensity_eta4(&self, k: usize) -> f64 {
        let tk = self.tiers[k];
        self.tiers
            .iter()
            .map(|t| t.lambda * ((t.bias * t.power) / (tk.bias * tk.power)).sqrt())
            .sum()
    }
}

/// Probability that a user associates with tier k under biased RSS.
pub fn tier_association_probability(tiers: &TierSet, k: usize) -> Result<f64> {
    let tk = *tiers.get(k)?;
    if tiers.all_eta4() {
        let num = tk.lambda * (tk.bias * tk.power).sqrt();
        let den: f64 = tiers.tiers().iter().map(|t| t.lambda * (t.bias * t.power).sqrt()).sum();
        return Ok(num / den);
    }
    let spec = QuadratureSpec::with_tolerances(1e-12, 1e-10);
    let scale = 1.0 / (PI * tk.lambda);
    let v = integrate_semi_infinite_scaled(
        |x2| {
            // in the variable x² so that the integrand is e^{−…} with unit Jacobian
            let x = x2.sqrt();
            PI * tk.lambda * (-tiers.void_exponent(k, x)).exp()
        },
        0.0,
        scale,
        &spec,
    )?;
    Ok(v)
}

/// Density of the service distance of a user associated with tier k.
pub fn tier_service_distance_pdf(tiers: &TierSet, k: usize, x: f64) -> Result<f64> {
    let tk = *tiers.get(k)?;
    if x < 0.0 {
        return Ok(0.0);
    }
    if tiers.all_eta4() {
        let s = tiers.effective_intensity_eta4(k);
        return Ok(2.0 * PI * s * x * (-PI * s * x * x).exp());
    }
    let a = tier_association_probability(tiers, k)?;
    if a <= 0.0 {
        return Err(Error::Domain(format!("tier {k} is never selected")));
    }
    Ok(2.0 * PI * tk.lambda * x / a * (-tiers.void_exponent(k, x)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::with_tolerances(1e-12, 1e-10)
    }

    #[test]
    fn config_validation() {
        assert!(NetworkConfig::new(1e-6, 10.0, 2.0, 0.0, 100.0).is_err());
        assert!(NetworkConfig::new(0.0, 10.0, 4.0, 0.0, 100.0).is_err());
        assert!(NetworkConfig::new(1e-6, 10.0, 4.0, -1.0, 100.0).is_err());
        assert!(NetworkConfig::new(1e-6, 10.0, 4.0, 0.0, 100.0).is_ok());
    }

    #[test]
    fn empty_ppp() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let region = AnnularRegion::new(0.0, 1e3).unwrap();
        assert!(sample_ppp(0.0, &region, &mut rng).is_empty());
        assert!(sample_ppp_radii(0.0, &region, &mut rng).is_empty());
    }

    #[test]
    fn points_lie_in_annulus() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let region = AnnularRegion::new(250.0, 1e4).unwrap();
        for p in sample_ppp(1e-6, &region, &mut rng) {
            assert!(p.norm() >= 250.0 && p.norm() < 1e4);
        }
        let r = sample_ppp_radii(1e-6, &region, &mut rng);
        assert!(r.windows(2).all(|w| w[0] < w[1]));
        assert!(r.iter().all(|&x| (250.0..1e4).contains(&x)));
    }

    #[test]
    fn nearest_distance_closed_forms() {
        let lam = 1e-6;
        assert_eq!(nearest_distance_pdf(lam, 0.0), 0.0);
        let median = (2f64.ln() / (PI * lam)).sqrt();
        assert_relative_eq!(median, 469.7, max_relative = 1e-4);
        assert_relative_eq!(nearest_distance_cdf(lam, median), 0.5, max_relative = 1e-12);
        let mean = integrate_semi_infinite_scaled(|r| r * nearest_distance_pdf(lam, r), 0.0, 1e5, &spec()).unwrap();
        assert_relative_eq!(mean, 500.0, max_relative = 1e-8);
    }

    #[test]
    fn joint_density_normalizes_and_marginalizes() {
        let lam = 2e-6;
        for n in 1..5 {
            let inner = |y: f64| {
                crate::numerics::integrate_finite(|x| joint_nearest_nth_pdf(lam, n, x, y).unwrap(), 0.0, y, &spec()).unwrap()
            };
            let total = integrate_semi_infinite_scaled(inner, 0.0, 1e5, &spec()).unwrap();
            assert_relative_eq!(total, 1.0, max_relative = 1e-6);
        }
        // marginal over y recovers the nearest-distance density
        for i in 1..=10 {
            let x = 60.0 * i as f64;
            let m = integrate_semi_infinite_scaled(|y| joint_nearest_nth_pdf(lam, 3, x, x + y).unwrap(), 0.0, 1e5, &spec()).unwrap();
            assert_relative_eq!(m, nearest_distance_pdf(lam, x), max_relative = 1e-6);
        }
        assert!(joint_nearest_nth_pdf(lam, 2, 2.0, 1.0).is_err());
    }

    #[test]
    fn cell_load_normalization_and_mean() {
        for &(lb, lu) in &[(1.0, 2.0), (1e-6, 5e-6), (3.0, 0.4)] {
            let mut total = 0.0;
            let mut mean = 0.0;
            let mut n = 0;
            loop {
                let p = cell_load_pmf(lb, lu, n);
                total += p;
                mean += n as f64 * p;
                n += 1;
                if n > 20 && p < 1e-18 {
                    break;
                }
            }
            assert_relative_eq!(total, 1.0, epsilon = 1e-9);
            assert_relative_eq!(mean, lu / lb, max_relative = 1e-6);
        }
        assert_eq!(cell_load_pmf(1.0, 0.0, 0), 1.0);
        assert_relative_eq!(cell_load_pmf(1.0, 1e-12, 0), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn voronoi_area_normalizes() {
        let lam = 1e-6;
        let total = integrate_semi_infinite_scaled(|v| voronoi_area_pdf(lam, v), 0.0, 1e6, &spec()).unwrap();
        assert_relative_eq!(total, 1.0, max_relative = 1e-8);
    }

    #[test]
    fn channel_access_limits() {
        assert!(channel_access_probability(1.0, 1e-9, 4).unwrap() < 1e-8);
        assert!(channel_access_probability(1.0, 1e6, 4).unwrap() > 1.0 - 1e-9);
        // one channel: busy whenever the cell is nonempty
        let p = channel_access_probability(1.0, 2.0, 1).unwrap();
        assert_relative_eq!(p, 1.0 - cell_load_pmf(1.0, 2.0, 0), max_relative = 1e-14);
    }

    fn two_tier(l2: f64, p1: f64, b2: f64) -> TierSet {
        TierSet::new(vec![
            Tier { lambda: 1e-6, power: p1, bias: 1.0, eta: 4.0 },
            Tier { lambda: l2, power: 1.0, bias: b2, eta: 4.0 },
        ])
        .unwrap()
    }

    #[test]
    fn association_reduced_form() {
        let single = TierSet::new(vec![Tier { lambda: 1e-6, power: 1.0, bias: 1.0, eta: 4.0 }]).unwrap();
        assert_eq!(tier_association_probability(&single, 0).unwrap(), 1.0);
        let same = two_tier(1e-6, 1.0, 1.0);
        assert_relative_eq!(tier_association_probability(&same, 0).unwrap(), 0.5);
        let t = two_tier(2e-6, 50.0, 1.0);
        let a1 = tier_association_probability(&t, 0).unwrap();
        assert_relative_eq!(a1, 50f64.sqrt() / (50f64.sqrt() + 2.0), max_relative = 1e-12);
        assert_relative_eq!(a1 + tier_association_probability(&t, 1).unwrap(), 1.0, max_relative = 1e-15);
        assert!(tier_association_probability(&t, 2).is_err());
    }

    #[test]
    fn association_integral_form() {
        let t = TierSet::new(vec![
            Tier { lambda: 1e-6, power: 20.0, bias: 1.0, eta: 3.5 },
            Tier { lambda: 4e-6, power: 1.0, bias: 2.0, eta: 4.0 },
            Tier { lambda: 9e-6, power: 0.1, bias: 1.0, eta: 3.0 },
        ])
        .unwrap();
        let sum: f64 = (0..3).map(|k| tier_association_probability(&t, k).unwrap()).sum();
        assert_relative_eq!(sum, 1.0, epsilon = 1e-6);
        // the numerical path reproduces the reduced form when all η = 4
        let t4 = two_tier(2e-6, 50.0, 10.0);
        let reduced = tier_association_probability(&t4, 0).unwrap();
        let numeric = integrate_semi_infinite_scaled(
            |x2| PI * 1e-6 * (-t4.void_exponent(0, x2.sqrt())).exp(),
            0.0,
            1e6,
            &spec(),
        )
        .unwrap();
        assert_relative_eq!(reduced, numeric, max_relative = 1e-8);
    }

    #[test]
    fn service_distance_pdf() {
        let single = TierSet::new(vec![Tier { lambda: 3e-6, power: 1.0, bias: 1.0, eta: 4.0 }]).unwrap();
        for i in 0..20 {
            let x = 25.0 * i as f64;
            assert_relative_eq!(
                tier_service_distance_pdf(&single, 0, x).unwrap(),
                nearest_distance_pdf(3e-6, x),
                max_relative = 1e-12
            );
        }
        let t = TierSet::new(vec![
            Tier { lambda: 1e-6, power: 20.0, bias: 1.0, eta: 3.5 },
            Tier { lambda: 4e-6, power: 1.0, bias: 2.0, eta: 4.0 },
        ])
        .unwrap();
        for set in [two_tier(2e-6, 50.0, 10.0), t] {
            for k in 0..2 {
                let total =
                    integrate_semi_infinite_scaled(|x| tier_service_distance_pdf(&set, k, x).unwrap(), 0.0, 1e5, &spec()).unwrap();
                assert_relative_eq!(total, 1.0, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn truncation_rule() {
        let lam = 1e-6;
        let r = truncation_radius(lam, 4.0, 250.0, 1e-4);
        assert_relative_eq!(r, 25_000.0, max_relative = 1e-12);
        assert_relative_eq!(truncation_radius(lam, 4.0, 1.0, 1e-4), 30.0 / (PI * lam).sqrt());
    }
}
