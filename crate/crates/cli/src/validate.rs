//! Oracle-equivalence suite behind `sgcell validate`: every headline
//! closed form next to its Poisson-field simulation.

use std::fmt;

use sgcell::interference::mean_power;
use sgcell::metrics::{asep_gaussian, ergodic_rate, sinr_cdf, sinr_cdf_gamma, LinkMode};
use sgcell::simulator::{
    simulate_downlink_field, simulate_rate, simulate_sinr, simulate_symbol_errors, simulate_uplink, MeanEstimate,
    Scenario, SimulationPlan,
};
use sgcell::{Constellation, LaplaceTransform, ModulationScheme, NetworkConfig, SignalingMode};

use crate::error::Result;
use crate::output::format_sig;

/// Sampling tolerance in standard errors.
const Z: f64 = 4.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub analytic: f64,
    pub monte_carlo: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        (self.analytic - self.monte_carlo).abs() <= self.tolerance
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<32} analytic {}  monte-carlo {}  |diff| {} (tol {})",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            format_sig(self.analytic),
            format_sig(self.monte_carlo),
            format_sig((self.analytic - self.monte_carlo).abs()),
            format_sig(self.tolerance)
        )
    }
}

fn binomial_se(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

fn outage_check(name: &'static str, analytic: f64, cfg: &NetworkConfig, plan: SimulationPlan) -> Result<Check> {
    let n = plan.realizations;
    let f = simulate_sinr(cfg, &plan)?.cdf_strict(1.0);
    Ok(Check {
        name,
        analytic,
        monte_carlo: f,
        tolerance: Z * binomial_se(analytic, n),
    })
}

/// Runs the suite at λ = 1 BS/km², P = 10 W, η = 4 with `n` realizations per check.
pub fn run_validation(n: usize, seed: u64) -> Result<Vec<Check>> {
    let lam = 1e-6;
    let net = NetworkConfig::interference_limited(lam, 10.0, 4.0)?;
    let plan = |s: Scenario, k: u64| SimulationPlan::new(s, n, seed.wrapping_add(k));
    let averaged = LinkMode::ScenarioAveraged;
    let mut checks = Vec::new();

    let random = LaplaceTransform::random_distance();
    checks.push(outage_check("outage, nearest BS", sinr_cdf(1.0, &random, averaged)?, &net, plan(Scenario::RandomR0, 0))?);
    let reuse = LaplaceTransform::frequency_reuse(lam, 3)?;
    checks.push(outage_check("outage, reuse 3", sinr_cdf(1.0, &reuse, averaged)?, &net, plan(Scenario::Reuse { delta: 3 }, 1))?);
    checks.push(outage_check(
        "outage, 2-antenna MRC + reuse 3",
        sinr_cdf_gamma(1.0, 2, &reuse, averaged)?,
        &net,
        plan(Scenario::Mrc { antennas: 2, delta: 3 }, 2),
    )?);

    // the uplink closed form models interferers as a PPP, hence the slack
    let uplink = 1.0 - LaplaceTransform::uplink().evaluate(1.0)?;
    let f = simulate_uplink(lam, 4.0, &plan(Scenario::Uplink { rho: 1e-9 }, 3))?.cdf_strict(1.0);
    checks.push(Check {
        name: "outage, uplink",
        analytic: uplink,
        monte_carlo: f,
        tolerance: 0.03 + Z * binomial_se(uplink, n),
    });

    let r0 = 250.0;
    let fixed = net.with_exclusion_radius(r0)?;
    let field = simulate_downlink_field(&fixed, &SignalingMode::Gaussian, r0, &plan(Scenario::FixedR0, 4))?;
    let power = MeanEstimate::from_samples(field.iter().map(|z| z.norm_sqr()));
    checks.push(Check {
        name: "interference power, r0 250",
        analytic: mean_power(&fixed, r0)?,
        monte_carlo: power.mean,
        tolerance: Z * power.std_error,
    });

    let rate = simulate_rate(&net, &plan(Scenario::RandomR0, 5))?;
    checks.push(Check {
        name: "ergodic rate, nearest BS",
        analytic: ergodic_rate(&random, averaged)?.value,
        monte_carlo: rate.mean,
        tolerance: Z * rate.std_error,
    });

    let r0 = 300.0;
    let fixed = net.with_exclusion_radius(r0)?;
    let lt = LaplaceTransform::baseline(lam, 10.0, 4.0, r0)?;
    let asep = asep_gaussian(&ModulationScheme::mqam(4)?, &lt, LinkMode::FixedR0 { cfg: fixed, r0 })?;
    let sim = simulate_symbol_errors(
        &fixed,
        &Constellation::qam(4)?,
        &SignalingMode::Gaussian,
        &plan(Scenario::FixedR0, 6).with_symbols(4),
    )?;
    checks.push(Check {
        name: "4-QAM ASEP, r0 300",
        analytic: asep,
        monte_carlo: sim.sep,
        tolerance: Z * sim.std_error,
    });
    Ok(checks)
}
