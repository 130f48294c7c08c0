//! Command-line surface: subcommands, flags and the top-level driver.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{ExperimentConfig, Metric};
use crate::error::{CliError, Result};
use crate::experiment::run_experiment;
use crate::output::write_csv;
use crate::validate::run_validation;

#[derive(Debug, Parser)]
#[command(name = "sgcell", version, about = "Interference and error-probability analysis of Poisson cellular networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// P{SINR < T}
    Outage(Flags),
    /// Ergodic rate E ln(1 + SINR), nats/s/Hz
    Rate(Flags),
    /// Average symbol error probability
    Asep(Flags),
    /// Per-dimension density of the aggregate interference
    InterferencePdf(Flags),
    /// KS distance of the interference from its Gaussian or stable approximation
    Ks(Flags),
    /// Run the oracle-equivalence suite
    Validate(Flags),
}

/// Every configuration key as a flag; values given here override `--config`.
#[derive(Debug, Clone, Default, Args)]
#[command(allow_negative_numbers = true)]
pub struct Flags {
    /// Configuration file of `key = value` lines (`#` starts a comment)
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Print the effective configuration and exit
    #[arg(long)]
    pub dump_config: bool,
    /// fixed-r0, random-r0, load-aware, multitier, reuse, uplink, nakagami, mrc, comp
    #[arg(long)]
    pub scenario: Option<String>,
    /// BS intensity (BS/km²)
    #[arg(long)]
    pub lambda_bs: Option<String>,
    /// Transmit power (W)
    #[arg(long)]
    pub power: Option<String>,
    /// Path-loss exponent (> 2)
    #[arg(long)]
    pub eta: Option<String>,
    /// Noise power (W)
    #[arg(long)]
    pub noise: Option<String>,
    /// Service distance (m)
    #[arg(long)]
    pub r0: Option<String>,
    /// Outage threshold (dB)
    #[arg(long)]
    pub threshold_db: Option<String>,
    /// Frequency reuse factor
    #[arg(long)]
    pub reuse: Option<String>,
    /// Per-BS activity probability
    #[arg(long)]
    pub load: Option<String>,
    /// Nakagami shape
    #[arg(long)]
    pub nakagami_m: Option<String>,
    /// MRC receive antennas
    #[arg(long)]
    pub antennas: Option<String>,
    /// Cooperating BSs in joint transmission
    #[arg(long)]
    pub comp_n: Option<String>,
    /// Uplink power-control level (W)
    #[arg(long)]
    pub rho: Option<String>,
    /// Tier table: `lambda(BS/km²) power bias eta` per line
    #[arg(long)]
    pub tiers: Option<String>,
    /// Modulation: bpsk, qpsk, 16qam, 4pam, 8psk, msk, de-bpsk, ...
    #[arg(long = "mod")]
    pub modulation: Option<String>,
    /// Interferer symbols: gaussian or exact
    #[arg(long)]
    pub signaling: Option<String>,
    /// Interference amplitude for interference-pdf (√W)
    #[arg(long)]
    pub x: Option<String>,
    /// KS reference: gaussian or stable
    #[arg(long)]
    pub ks_reference: Option<String>,
    /// var:lo:hi:steps
    #[arg(long)]
    pub sweep: Option<String>,
    /// Add Monte-Carlo columns
    #[arg(long)]
    pub simulate: bool,
    /// Monte-Carlo realizations per sweep point
    #[arg(long)]
    pub realizations: Option<String>,
    /// Symbols per realization in symbol-error simulations
    #[arg(long)]
    pub symbols: Option<String>,
    /// Master seed, shared by every sweep point
    #[arg(long)]
    pub seed: Option<String>,
    /// Output CSV (stdout when absent)
    #[arg(long)]
    pub out: Option<String>,
    /// Worker threads (default: available parallelism)
    #[arg(long)]
    pub workers: Option<String>,
}

impl Flags {
    fn pairs(&self) -> Vec<(&'static str, &str)> {
        let keyed = [
            ("scenario", &self.scenario),
            ("lambda-bs", &self.lambda_bs),
            ("power", &self.power),
            ("eta", &self.eta),
            ("noise", &self.noise),
            ("r0", &self.r0),
            ("threshold-db", &self.threshold_db),
            ("reuse", &self.reuse),
            ("load", &self.load),
            ("nakagami-m", &self.nakagami_m),
            ("antennas", &self.antennas),
            ("comp-n", &self.comp_n),
            ("rho", &self.rho),
            ("tiers", &self.tiers),
            ("mod", &self.modulation),
            ("signaling", &self.signaling),
            ("x", &self.x),
            ("ks-reference", &self.ks_reference),
            ("sweep", &self.sweep),
            ("realizations", &self.realizations),
            ("symbols", &self.symbols),
            ("seed", &self.seed),
            ("out", &self.out),
            ("workers", &self.workers),
        ];
        let mut v: Vec<(&'static str, &str)> = keyed
            .into_iter()
            .filter_map(|(k, v)| v.as_deref().map(|v| (k, v)))
            .collect();
        if self.simulate {
            v.push(("simulate", "true"));
        }
        v
    }

    /// Defaults, then the config file, then the flags, then the subcommand's metric.
    pub fn resolve(&self, metric: Option<Metric>) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::default();
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        for (k, v) in self.pairs() {
            cfg.set(k, v).map_err(|e| CliError::Config(format!("--{k}: {e}")))?;
        }
        if let Some(m) = metric {
            cfg.metric = m;
        }
        Ok(cfg)
    }
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Config(format!("workers: {e}")))
}

/// Runs one invocation, writing tables and reports to `stdout` unless an
/// output path is configured.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<()> {
    let io = |path: &str| {
        let path = path.to_string();
        move |source| CliError::Io { path, source }
    };
    let (flags, metric) = match &cli.command {
        Command::Outage(f) => (f, Some(Metric::Outage)),
        Command::Rate(f) => (f, Some(Metric::Rate)),
        Command::Asep(f) => (f, Some(Metric::Asep)),
        Command::InterferencePdf(f) => (f, Some(Metric::InterferencePdf)),
        Command::Ks(f) => (f, Some(Metric::Ks)),
        Command::Validate(f) => (f, None),
    };
    let cfg = flags.resolve(metric)?;
    if flags.dump_config {
        return stdout.write_all(cfg.to_config_string().as_bytes()).map_err(io("stdout"));
    }
    let pool = pool(cfg.workers)?;

    if metric.is_none() {
        if cfg.realizations == 0 {
            return Err(CliError::Config("realizations must be ≥ 1".into()));
        }
        let checks = pool.install(|| run_validation(cfg.realizations, cfg.seed))?;
        for c in &checks {
            writeln!(stdout, "{c}").map_err(io("stdout"))?;
        }
        let failed = checks.iter().filter(|c| !c.passed()).count();
        if failed > 0 {
            return Err(CliError::Numerical(format!("{failed} of {} oracle checks failed", checks.len())));
        }
        return Ok(());
    }

    let rows = pool.install(|| run_experiment(&cfg))?;
    match &cfg.out {
        Some(path) => {
            let name = path.display().to_string();
            let mut file = std::io::BufWriter::new(std::fs::File::create(path).map_err(io(&name))?);
            write_csv(&mut file, &rows, cfg.seed).map_err(io(&name))?;
            file.flush().map_err(io(&name))
        }
        None => write_csv(stdout, &rows, cfg.seed).map_err(io("stdout")),
    }
}
