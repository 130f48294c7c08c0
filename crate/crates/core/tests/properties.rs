//! Randomized invariants across the analytical and simulation modules.

use proptest::prelude::*;
use sgcell::geometry::{Tier, TierSet};
use sgcell::interference::{cf_aggregate, Constellation, SignalingMode};
use sgcell::metrics::{asep_gaussian, sinr_cdf, LinkMode, ModulationScheme};
use sgcell::numerics::special::{hyp1f1, kummer_bracket};
use sgcell::simulator::{simulate_links, simulate_sinr, Scenario, SimulationPlan};
use sgcell::transforms::ServingTier;
use sgcell::{LaplaceTransform, NetworkConfig};

/// L(0) = 1, L ∈ [0, 1] and nonincreasing on 50 points spanning `scale`.
fn assert_transform(lt: &LaplaceTransform, scale: f64) -> Result<(), TestCaseError> {
    prop_assert_eq!(lt.evaluate(0.0).unwrap(), 1.0);
    let mut prev = 1.0;
    for i in 1..=50 {
        let z = scale * 10f64.powf(-3.0 + 6.0 * i as f64 / 50.0);
        let v = lt.evaluate(z).unwrap();
        prop_assert!((0.0..=1.0).contains(&v), "L({}) = {}", z, v);
        prop_assert!(v <= prev + 1e-12, "not monotone at {}: {} > {}", z, v, prev);
        prev = v;
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fixed_distance_transforms(lam in 1e-7..1e-4f64, p in 0.1..50.0f64, eta in 2.2..6.0f64, r0 in 10.0..800.0f64) {
        let lt = LaplaceTransform::baseline(lam, p, eta, r0).unwrap();
        assert_transform(&lt, r0.powf(eta) / p)?;
        let lt = LaplaceTransform::zeta(lam, r0, eta, Constellation::qam(16).unwrap()).unwrap();
        assert_transform(&lt, 1.0)?;
    }

    #[test]
    fn normalized_transforms(p in 0.0..1.0f64, m in 1u32..6, ratio in 0.1..10.0f64, excl in 1.0..3.0f64) {
        assert_transform(&LaplaceTransform::random_distance(), 1.0)?;
        assert_transform(&LaplaceTransform::uplink(), 1.0)?;
        assert_transform(&LaplaceTransform::load_aware(p).unwrap(), 1.0)?;
        assert_transform(&LaplaceTransform::nakagami(1e-6, 200.0, 200.0 * excl, m, 3.5, ratio).unwrap(), 1.0)?;
        assert_transform(&LaplaceTransform::generalized(1e-6, 200.0, 200.0 * excl, 1.0, ratio).unwrap(), 1.0)?;
    }

    #[test]
    fn multitier_transforms(l2 in 1e-7..1e-5f64, p1 in 1.0..100.0f64, b2 in 0.1..20.0f64) {
        let tiers = TierSet::new(vec![
            Tier { lambda: 1e-6, power: p1, bias: 1.0, eta: 4.0 },
            Tier { lambda: l2, power: 1.0, bias: b2, eta: 4.0 },
        ]).unwrap();
        for serving in [ServingTier::Tier(0), ServingTier::Tier(1), ServingTier::Averaged] {
            assert_transform(&LaplaceTransform::multitier(tiers.clone(), serving).unwrap(), 1.0)?;
        }
    }

    #[test]
    fn outage_is_a_cdf(lam in 1e-7..1e-5f64, r0 in 50.0..600.0f64, noise in 0.0..1e-9f64) {
        let cfg = NetworkConfig::new(lam, 10.0, 4.0, noise, r0).unwrap();
        let lt = LaplaceTransform::baseline(lam, 10.0, 4.0, r0).unwrap();
        let mut prev = 0.0;
        for i in 0..100 {
            let t = 10f64.powf(-4.0 + 8.0 * i as f64 / 99.0);
            let f = sinr_cdf(t, &lt, LinkMode::FixedR0 { cfg, r0 }).unwrap();
            prop_assert!((0.0..=1.0).contains(&f));
            prop_assert!(f >= prev - 1e-12);
            prev = f;
        }
    }

    #[test]
    fn cf_is_even_and_bounded(w in 0.0..2e5f64, r0 in 50.0..600.0f64) {
        let cfg = NetworkConfig::new(1e-6, 10.0, 4.0, 0.0, r0).unwrap();
        for mode in [SignalingMode::Exact(Constellation::qam(16).unwrap()), SignalingMode::Gaussian] {
            let a = cf_aggregate(w, &cfg, &mode, r0).unwrap();
            prop_assert!((0.0..=1.0).contains(&a));
            prop_assert_eq!(a, cf_aggregate(-w, &cfg, &mode, r0).unwrap());
        }
    }

    #[test]
    fn bracket_matches_confluent_function(x in 1e-4..500.0f64, eta in 2.1..7.0f64) {
        let d = 2.0 / eta;
        let direct = 1.0 - hyp1f1(-d, 1.0 - d, -x).unwrap();
        let b = kummer_bracket(x, eta).unwrap();
        prop_assert!((direct - b).abs() <= 1e-9 * b.abs().max(1e-3), "{} vs {}", direct, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn asep_is_bounded_and_ordered(p in 0.05..0.95f64, m in prop::sample::select(vec![4u32, 16, 64])) {
        let s = ModulationScheme::mqam(m).unwrap();
        let cap = (m as f64 - 1.0) / m as f64;
        let full = asep_gaussian(&s, &LaplaceTransform::random_distance(), LinkMode::ScenarioAveraged).unwrap();
        let thinned = asep_gaussian(&s, &LaplaceTransform::load_aware(p).unwrap(), LinkMode::ScenarioAveraged).unwrap();
        prop_assert!(full <= cap && thinned >= 0.0);
        // a pointwise-larger transform (lighter load) gives a smaller ASEP
        prop_assert!(thinned < full);
    }
}

#[test]
fn simulation_is_independent_of_thread_count() {
    let cfg = NetworkConfig::interference_limited(1e-6, 10.0, 4.0).unwrap();
    let plans = [
        SimulationPlan::new(Scenario::RandomR0, 2000, 5),
        SimulationPlan::new(Scenario::Reuse { delta: 3 }, 2000, 6),
        SimulationPlan::new(Scenario::Uplink { rho: 1.0 }, 200, 7),
    ];
    for plan in &plans {
        let run = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| simulate_links(&cfg, plan).unwrap())
        };
        assert_eq!(run(1), run(3));
    }
}

#[test]
fn empirical_cdfs_and_interval_scaling() {
    let cfg = NetworkConfig::interference_limited(1e-6, 10.0, 4.0).unwrap();
    let small = simulate_sinr(&cfg, &SimulationPlan::new(Scenario::RandomR0, 20_000, 8)).unwrap();
    let large = simulate_sinr(&cfg, &SimulationPlan::new(Scenario::RandomR0, 40_000, 9)).unwrap();
    let mut prev = 0.0;
    for i in 0..200 {
        let t = 10f64.powf(-3.0 + 6.0 * i as f64 / 199.0);
        let f = small.cdf(t);
        assert!((0.0..=1.0).contains(&f) && f >= prev);
        prev = f;
    }
    let width = |e: &sgcell::simulator::EmpiricalDistribution| {
        let (lo, hi) = e.ci(1.0, 0.99).unwrap();
        hi - lo
    };
    let ratio = width(&large) / width(&small);
    assert!((ratio * 2f64.sqrt() - 1.0).abs() < 0.15, "{ratio}");
}
