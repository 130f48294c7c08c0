//! Evaluation of one experiment: a closed form per sweep point and, on
//! request, its Monte-Carlo counterpart.

use sgcell::interference::{alpha_stable_cdf, cumulant, gaussian_cdf, per_dimension_cdf, per_dimension_pdf};
use sgcell::metrics::{
    asep_eid, asep_gaussian, asep_nakagami, ergodic_rate, sinr_cdf, sinr_cdf_gamma, sinr_cdf_gamma_averaged, LinkMode,
};
use sgcell::numerics::ks::ks_distance_values;
use sgcell::numerics::quadrature::QuadratureSpec;
use sgcell::simulator::empirical::normal_quantile;
use sgcell::simulator::{
    simulate_downlink_field, simulate_rate, simulate_sinr, simulate_symbol_errors,
    EmpiricalDistribution, Scenario, SimulationPlan,
};
use sgcell::transforms::{lt_network_mimo, Scenario as LtScenario, ServingTier};
use sgcell::{Constellation, LaplaceTransform, ModulationScheme, NetworkConfig, SignalingMode};

use crate::config::{ExperimentConfig, KsReference, Metric, ScenarioKind, Signaling};
use crate::error::{CliError, Result};

/// Two-sided level of every reported Monte-Carlo interval.
pub const CI_LEVEL: f64 = 0.99;

/// Samples behind the joint-transmission transform, which has no closed form.
const COMP_SAMPLES: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McPoint {
    pub value: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub realizations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub x: f64,
    pub analytic: f64,
    pub mc: Option<McPoint>,
}

/// Evaluates every sweep point in order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<Row>> {
    cfg.validate()?;
    let var = cfg.abscissa().to_string();
    let grid = match &cfg.sweep {
        Some(s) => s.grid(),
        None => vec![cfg.get(&var).expect("abscissa is a numeric key")],
    };
    grid.into_iter()
        .map(|x| {
            let point = cfg.with_value(&var, x)?;
            let analytic = analytic(&point)?;
            let mc = if cfg.simulate { Some(monte_carlo(&point)?) } else { None };
            Ok(Row { x, analytic, mc })
        })
        .collect()
}

fn unsupported(cfg: &ExperimentConfig, what: &str) -> CliError {
    CliError::Config(format!(
        "{} is not available for the {} scenario{what}",
        cfg.metric.name(),
        cfg.scenario.name()
    ))
}

fn threshold(cfg: &ExperimentConfig) -> f64 {
    10f64.powf(cfg.threshold_db / 10.0)
}

/// The closed forms for these scenarios are the η = 4, noise-free ones.
fn require_normalized(cfg: &ExperimentConfig) -> Result<()> {
    if cfg.eta != 4.0 || cfg.noise != 0.0 {
        return Err(CliError::Config(format!(
            "the {} scenario is analysed for eta = 4 without noise (got eta = {}, noise = {})",
            cfg.scenario.name(),
            cfg.eta,
            cfg.noise
        )));
    }
    Ok(())
}

/// Rayleigh-faded useful link: the transform of (I + N)/S and how to read it.
fn rayleigh_link(cfg: &ExperimentConfig) -> Result<(LaplaceTransform, LinkMode)> {
    let net = cfg.network()?;
    let lam = net.lambda_bs;
    Ok(match cfg.scenario {
        ScenarioKind::FixedR0 => (
            LaplaceTransform::baseline(lam, cfg.power, cfg.eta, cfg.r0)?,
            LinkMode::FixedR0 { cfg: net, r0: cfg.r0 },
        ),
        ScenarioKind::RandomR0 if cfg.eta == 4.0 && cfg.noise == 0.0 => {
            (LaplaceTransform::random_distance(), LinkMode::ScenarioAveraged)
        }
        ScenarioKind::RandomR0 => {
            // E e^{−a(I+N)/S} is the survival of the SINR averaged over r₀
            let (power, eta) = (cfg.power, cfg.eta);
            let lt = LaplaceTransform::new(LtScenario::Custom, vec![("lambda", lam), ("eta", eta)], move |a| {
                // the conditional arguments a·r₀^η/P overflow long before the
                // survival leaves 0
                if a > 1e100 {
                    return Ok(0.0);
                }
                let family = |r0: f64| LaplaceTransform::baseline(lam, power, eta, r0);
                Ok(1.0 - sinr_cdf_gamma_averaged(a, 1, family, &net)?)
            });
            (lt, LinkMode::ScenarioAveraged)
        }
        ScenarioKind::LoadAware => {
            require_normalized(cfg)?;
            (LaplaceTransform::load_aware(cfg.load)?, LinkMode::ScenarioAveraged)
        }
        ScenarioKind::Multitier => {
            if cfg.noise != 0.0 {
                return Err(CliError::Config("the multitier scenario is analysed without noise".into()));
            }
            (LaplaceTransform::multitier(cfg.load_tiers()?, ServingTier::Averaged)?, LinkMode::ScenarioAveraged)
        }
        ScenarioKind::Reuse => {
            require_normalized(cfg)?;
            (LaplaceTransform::frequency_reuse(lam, cfg.reuse)?, LinkMode::ScenarioAveraged)
        }
        ScenarioKind::Uplink => {
            require_normalized(cfg)?;
            (LaplaceTransform::uplink(), LinkMode::ScenarioAveraged)
        }
        ScenarioKind::Comp => {
            require_normalized(cfg)?;
            let (n, seed) = (cfg.comp_n, cfg.seed);
            let lt = LaplaceTransform::new(LtScenario::Custom, vec![("lambda", lam), ("n", n as f64)], move |a| {
                Ok(lt_network_mimo(a, lam, n, COMP_SAMPLES, seed)?.value)
            });
            (lt, LinkMode::ScenarioAveraged)
        }
        ScenarioKind::Nakagami | ScenarioKind::Mrc => return Err(unsupported(cfg, " with a Rayleigh useful link")),
    })
}

fn nakagami_lt(cfg: &ExperimentConfig) -> Result<LaplaceTransform> {
    if cfg.noise != 0.0 {
        return Err(CliError::Config("the nakagami scenario is analysed without noise".into()));
    }
    let net = cfg.network()?;
    Ok(LaplaceTransform::nakagami(net.lambda_bs, cfg.r0, cfg.r0, cfg.nakagami_m, cfg.eta, 1.0)?)
}

fn mrc_lt(cfg: &ExperimentConfig) -> Result<LaplaceTransform> {
    require_normalized(cfg)?;
    if cfg.reuse == 1 {
        Ok(LaplaceTransform::random_distance())
    } else {
        Ok(LaplaceTransform::frequency_reuse(cfg.network()?.lambda_bs, cfg.reuse)?)
    }
}

fn scheme(cfg: &ExperimentConfig) -> Result<ModulationScheme> {
    ModulationScheme::parse(&cfg.modulation).map_err(|e| CliError::Config(format!("mod: {e}")))
}

fn constellation(cfg: &ExperimentConfig) -> Result<Constellation> {
    scheme(cfg)?
        .constellation()
        .ok_or_else(|| CliError::Config(format!("mod: '{}' has no constellation to simulate", cfg.modulation)))
}

fn signaling(cfg: &ExperimentConfig) -> Result<SignalingMode> {
    Ok(match cfg.signaling {
        Signaling::Gaussian => SignalingMode::Gaussian,
        Signaling::Exact => SignalingMode::Exact(constellation(cfg)?),
    })
}

/// Field-level metrics are defined for a receiver at fixed r₀.
fn fixed_field(cfg: &ExperimentConfig) -> Result<NetworkConfig> {
    if cfg.scenario != ScenarioKind::FixedR0 {
        return Err(unsupported(cfg, "; use fixed-r0"));
    }
    cfg.network()
}

/// ±4σ grid on which interference KS distances are measured.
fn ks_grid(net: &NetworkConfig, mode: &SignalingMode, r0: f64) -> Result<Vec<f64>> {
    let sigma = cumulant(2, net, mode, r0)?.sqrt();
    Ok((-40..=40).map(|i| 0.1 * i as f64 * sigma).collect())
}

/// Reference CDF on the KS grid.
fn ks_reference(cfg: &ExperimentConfig, net: &NetworkConfig, mode: &SignalingMode, grid: &[f64]) -> Result<Vec<f64>> {
    let var = cumulant(2, net, mode, cfg.r0)?;
    let spec = QuadratureSpec::default();
    Ok(grid
        .iter()
        .map(|&x| match cfg.ks_reference {
            KsReference::Gaussian => Ok(gaussian_cdf(x, var)),
            KsReference::Stable => alpha_stable_cdf(x, net, mode, &spec),
        })
        .collect::<sgcell::Result<_>>()?)
}

fn analytic(cfg: &ExperimentConfig) -> Result<f64> {
    let t = threshold(cfg);
    match (cfg.metric, cfg.scenario) {
        (Metric::Outage, ScenarioKind::Nakagami) => {
            let m = cfg.nakagami_m;
            Ok(sinr_cdf_gamma(m as f64 * t, m, &nakagami_lt(cfg)?, LinkMode::ScenarioAveraged)?)
        }
        (Metric::Outage, ScenarioKind::Mrc) => Ok(sinr_cdf_gamma(t, cfg.antennas, &mrc_lt(cfg)?, LinkMode::ScenarioAveraged)?),
        (Metric::Outage, _) => {
            let (lt, mode) = rayleigh_link(cfg)?;
            Ok(sinr_cdf(t, &lt, mode)?)
        }
        (Metric::Rate, _) => {
            let (lt, mode) = rayleigh_link(cfg)?;
            Ok(ergodic_rate(&lt, mode)?.value)
        }
        (Metric::Asep, ScenarioKind::Nakagami) => {
            Ok(asep_nakagami(&scheme(cfg)?, cfg.nakagami_m, &nakagami_lt(cfg)?, LinkMode::ScenarioAveraged)?)
        }
        (Metric::Asep, scenario) => match cfg.signaling {
            Signaling::Gaussian => {
                let (lt, mode) = rayleigh_link(cfg)?;
                Ok(asep_gaussian(&scheme(cfg)?, &lt, mode)?)
            }
            Signaling::Exact if scenario == ScenarioKind::FixedR0 => {
                Ok(asep_eid(cfg.r0, &cfg.network()?, &constellation(cfg)?, &scheme(cfg)?)?)
            }
            Signaling::Exact => Err(unsupported(cfg, " with exact interferer symbols; use fixed-r0")),
        },
        (Metric::InterferencePdf, _) => {
            let net = fixed_field(cfg)?;
            Ok(per_dimension_pdf(cfg.x, &net, &signaling(cfg)?, cfg.r0, &QuadratureSpec::default())?)
        }
        (Metric::Ks, _) => {
            let net = fixed_field(cfg)?;
            let mode = signaling(cfg)?;
            let spec = QuadratureSpec::default();
            let grid = ks_grid(&net, &mode, cfg.r0)?;
            let exact: Vec<f64> = grid
                .iter()
                .map(|&x| per_dimension_cdf(x, &net, &mode, cfg.r0, &spec))
                .collect::<sgcell::Result<_>>()?;
            Ok(ks_distance_values(&exact, &ks_reference(cfg, &net, &mode, &grid)?, &grid)?)
        }
    }
}

fn plan(cfg: &ExperimentConfig, scenario: Scenario) -> SimulationPlan {
    SimulationPlan::new(scenario, cfg.realizations, cfg.seed).with_symbols(cfg.symbols)
}

fn sim_scenario(cfg: &ExperimentConfig) -> Result<Scenario> {
    Ok(match cfg.scenario {
        ScenarioKind::FixedR0 => Scenario::FixedR0,
        ScenarioKind::RandomR0 => Scenario::RandomR0,
        ScenarioKind::LoadAware => Scenario::LoadAware { p: cfg.load },
        ScenarioKind::Multitier => Scenario::Multitier(cfg.load_tiers()?),
        ScenarioKind::Reuse => Scenario::Reuse { delta: cfg.reuse },
        ScenarioKind::Uplink => Scenario::Uplink { rho: cfg.rho },
        ScenarioKind::Nakagami => Scenario::Nakagami { m: cfg.nakagami_m },
        ScenarioKind::Mrc => Scenario::Mrc {
            antennas: cfg.antennas,
            delta: cfg.reuse,
        },
        ScenarioKind::Comp => Scenario::Comp { n: cfg.comp_n },
    })
}

fn interval(value: f64, std_error: f64, realizations: usize) -> Result<McPoint> {
    let half = normal_quantile(CI_LEVEL)? * std_error;
    Ok(McPoint {
        value,
        ci_low: value - half,
        ci_high: value + half,
        realizations,
    })
}

fn proportion(p: f64, n: usize) -> Result<McPoint> {
    let mut pt = interval(p, (p * (1.0 - p) / n as f64).sqrt(), n)?;
    pt.ci_low = pt.ci_low.max(0.0);
    pt.ci_high = pt.ci_high.min(1.0);
    Ok(pt)
}

fn monte_carlo(cfg: &ExperimentConfig) -> Result<McPoint> {
    let net = cfg.network()?;
    let n = cfg.realizations;
    match cfg.metric {
        Metric::Outage => {
            let e = simulate_sinr(&net, &plan(cfg, sim_scenario(cfg)?))?;
            proportion(e.cdf_strict(threshold(cfg)), n)
        }
        Metric::Rate => {
            if matches!(cfg.scenario, ScenarioKind::Nakagami | ScenarioKind::Mrc) {
                return Err(unsupported(cfg, " with a Rayleigh useful link"));
            }
            let m = simulate_rate(&net, &plan(cfg, sim_scenario(cfg)?))?;
            interval(m.mean, m.std_error, n)
        }
        Metric::Asep => {
            let scenario = match cfg.scenario {
                ScenarioKind::FixedR0 => Scenario::FixedR0,
                ScenarioKind::RandomR0 => Scenario::RandomR0,
                _ => return Err(unsupported(cfg, " by symbol simulation; use fixed-r0 or random-r0")),
            };
            let est = simulate_symbol_errors(&net, &constellation(cfg)?, &signaling(cfg)?, &plan(cfg, scenario))?;
            let mut pt = interval(est.sep, est.std_error, n)?;
            pt.ci_low = pt.ci_low.max(0.0);
            Ok(pt)
        }
        Metric::InterferencePdf => {
            let net = fixed_field(cfg)?;
            let mode = signaling(cfg)?;
            let field = simulate_downlink_field(&net, &mode, cfg.r0, &plan(cfg, Scenario::FixedR0))?;
            // histogram density in a bin of a tenth of the per-dimension deviation
            let h = 0.1 * cumulant(2, &net, &mode, cfg.r0)?.sqrt();
            let inside = field.iter().filter(|z| (z.re - cfg.x).abs() < 0.5 * h).count();
            let p = proportion(inside as f64 / n as f64, n)?;
            Ok(McPoint {
                value: p.value / h,
                ci_low: p.ci_low / h,
                ci_high: p.ci_high / h,
                realizations: n,
            })
        }
        Metric::Ks => {
            let net = fixed_field(cfg)?;
            let mode = signaling(cfg)?;
            let field = simulate_downlink_field(&net, &mode, cfg.r0, &plan(cfg, Scenario::FixedR0))?;
            let e = EmpiricalDistribution::new(field.iter().map(|z| z.re).collect())?;
            let grid = ks_grid(&net, &mode, cfg.r0)?;
            let empirical: Vec<f64> = grid.iter().map(|&x| e.cdf(x)).collect();
            let d = ks_distance_values(&empirical, &ks_reference(cfg, &net, &mode, &grid)?, &grid)?;
            // Dvoretzky–Kiefer–Wolfowitz band on the empirical CDF
            let band = ((2.0 / (1.0 - CI_LEVEL)).ln() / (2.0 * n as f64)).sqrt();
            Ok(McPoint {
                value: d,
                ci_low: (d - band).max(0.0),
                ci_high: d + band,
                realizations: n,
            })
        }
    }
}
