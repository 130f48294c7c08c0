//! Flat `key = value` experiment configuration.
//!
//! Every key doubles as a `--key` flag; values are applied in the order
//! defaults → config file → flags, so flags win. Intensities are entered in
//! BS/km² and converted to per-m² only when the network is built.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use sgcell::geometry::PER_KM2;
use sgcell::{NetworkConfig, Tier, TierSet};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Outage,
    Rate,
    Asep,
    InterferencePdf,
    Ks,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    FixedR0,
    RandomR0,
    LoadAware,
    Multitier,
    Reuse,
    Uplink,
    Nakagami,
    Mrc,
    Comp,
}

/// Symbols carried by the interferers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Signaling {
    Gaussian,
    /// Interferers use the desired link's constellation.
    Exact,
}

/// Distribution the KS distance of the interference is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KsReference {
    Gaussian,
    Stable,
}

macro_rules! named {
    ($t:ty, $what:literal, { $($v:ident => $n:literal),+ $(,)? }) => {
        impl $t {
            pub fn name(self) -> &'static str {
                match self { $(Self::$v => $n),+ }
            }

            pub fn parse(s: &str) -> std::result::Result<Self, String> {
                match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
                    $($n => Ok(Self::$v),)+
                    other => Err(format!(
                        concat!("unknown ", $what, " '{}' (expected one of: {})"),
                        other,
                        [$($n),+].join(", ")
                    )),
                }
            }
        }
    };
}

named!(Metric, "metric", {
    Outage => "outage", Rate => "rate", Asep => "asep", InterferencePdf => "interference-pdf", Ks => "ks",
});
named!(ScenarioKind, "scenario", {
    FixedR0 => "fixed-r0", RandomR0 => "random-r0", LoadAware => "load-aware", Multitier => "multitier",
    Reuse => "reuse", Uplink => "uplink", Nakagami => "nakagami", Mrc => "mrc", Comp => "comp",
});
named!(Signaling, "signaling", { Gaussian => "gaussian", Exact => "exact" });
named!(KsReference, "KS reference", { Gaussian => "gaussian", Stable => "stable" });

/// `var:lo:hi:steps` — `steps` evenly spaced values of one numeric key.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub var: String,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl Sweep {
    pub fn parse(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let [var, lo, hi, steps] = parts[..] else {
            return Err(format!("sweep must be var:lo:hi:steps, got '{s}'"));
        };
        let var = canonical_key(var);
        if !SWEEPABLE.contains(&var.as_str()) {
            return Err(format!("cannot sweep '{var}' (sweepable: {})", SWEEPABLE.join(", ")));
        }
        let num = |v: &str| v.parse::<f64>().map_err(|_| format!("sweep bound '{v}' is not a number"));
        let sweep = Self {
            var,
            lo: num(lo)?,
            hi: num(hi)?,
            steps: steps.parse().map_err(|_| format!("sweep steps '{steps}' is not a positive integer"))?,
        };
        sweep.check()?;
        Ok(sweep)
    }

    fn check(&self) -> std::result::Result<(), String> {
        if !(self.lo.is_finite() && self.hi.is_finite()) || self.steps == 0 {
            return Err("sweep needs finite bounds and at least one step".into());
        }
        if self.steps == 1 && self.lo != self.hi {
            return Err("a one-step sweep needs lo = hi".into());
        }
        if self.steps > 1 && !(self.hi > self.lo) {
            return Err(format!("sweep grid must be strictly increasing (lo {} ≥ hi {})", self.lo, self.hi));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.lo];
        }
        let n = (self.steps - 1) as f64;
        (0..self.steps).map(|i| self.lo + (self.hi - self.lo) * i as f64 / n).collect()
    }
}

impl std::fmt::Display for Sweep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}:{}", self.var, self.lo, self.hi, self.steps)
    }
}

/// Numeric keys that `--sweep` may vary.
pub const SWEEPABLE: &[&str] = &[
    "threshold-db", "r0", "lambda-bs", "power", "eta", "noise", "reuse", "load", "nakagami-m", "antennas", "comp-n",
    "rho", "x",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub metric: Metric,
    pub scenario: ScenarioKind,
    /// BS intensity in BS/km².
    pub lambda_bs: f64,
    /// Transmit power (W).
    pub power: f64,
    pub eta: f64,
    /// Noise power (W).
    pub noise: f64,
    /// Service distance / exclusion radius (m).
    pub r0: f64,
    /// SINR threshold for outage (dB).
    pub threshold_db: f64,
    pub reuse: usize,
    /// Per-BS activity probability.
    pub load: f64,
    pub nakagami_m: u32,
    pub antennas: u32,
    pub comp_n: usize,
    /// Uplink received power-control level (W).
    pub rho: f64,
    /// Tier table: one `lambda(BS/km²) power bias eta` row per line.
    pub tiers: Option<PathBuf>,
    pub modulation: String,
    pub signaling: Signaling,
    /// Per-dimension interference amplitude for the PDF metric (√W).
    pub x: f64,
    pub ks_reference: KsReference,
    pub sweep: Option<Sweep>,
    pub simulate: bool,
    pub realizations: usize,
    pub symbols: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    /// Worker threads; 0 uses the available parallelism.
    pub workers: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            metric: Metric::Outage,
            scenario: ScenarioKind::RandomR0,
            lambda_bs: 1.0,
            power: 10.0,
            eta: 4.0,
            noise: 0.0,
            r0: 250.0,
            threshold_db: 0.0,
            reuse: 1,
            load: 1.0,
            nakagami_m: 1,
            antennas: 1,
            comp_n: 2,
            rho: 1.0,
            tiers: None,
            modulation: "4qam".into(),
            signaling: Signaling::Gaussian,
            x: 0.0,
            ks_reference: KsReference::Gaussian,
            sweep: None,
            simulate: false,
            realizations: 10_000,
            symbols: 1,
            seed: 1,
            out: None,
            workers: 0,
        }
    }
}

/// Lower-case, hyphenated form of a key (`lambda_bs` → `lambda-bs`).
pub fn canonical_key(key: &str) -> String {
    key.trim().trim_start_matches("--").to_ascii_lowercase().replace('_', "-")
}

fn num<T: std::str::FromStr>(key: &str, value: &str) -> std::result::Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("{key}: cannot parse '{value}'"))
}

fn flag(key: &str, value: &str) -> std::result::Result<bool, String> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(format!("{key}: expected true or false, got '{value}'")),
    }
}

fn optional_path(value: &str) -> Option<PathBuf> {
    (!value.is_empty()).then(|| PathBuf::from(value))
}

impl ExperimentConfig {
    /// Sets one key from its text form.
    pub fn set(&mut self, key: &str, value: &str) -> std::result::Result<(), String> {
        let key = canonical_key(key);
        let value = value.trim();
        match key.as_str() {
            "metric" => self.metric = Metric::parse(value)?,
            "scenario" => self.scenario = ScenarioKind::parse(value)?,
            "lambda-bs" => self.lambda_bs = num(&key, value)?,
            "power" => self.power = num(&key, value)?,
            "eta" => self.eta = num(&key, value)?,
            "noise" => self.noise = num(&key, value)?,
            "r0" => self.r0 = num(&key, value)?,
            "threshold-db" => self.threshold_db = num(&key, value)?,
            "reuse" => self.reuse = num(&key, value)?,
            "load" => self.load = num(&key, value)?,
            "nakagami-m" => self.nakagami_m = num(&key, value)?,
            "antennas" => self.antennas = num(&key, value)?,
            "comp-n" => self.comp_n = num(&key, value)?,
            "rho" => self.rho = num(&key, value)?,
            "tiers" => self.tiers = optional_path(value),
            "mod" => self.modulation = value.to_string(),
            "signaling" => self.signaling = Signaling::parse(value)?,
            "x" => self.x = num(&key, value)?,
            "ks-reference" => self.ks_reference = KsReference::parse(value)?,
            "sweep" => self.sweep = if value.is_empty() { None } else { Some(Sweep::parse(value)?) },
            "simulate" => self.simulate = flag(&key, value)?,
            "realizations" => self.realizations = num(&key, value)?,
            "symbols" => self.symbols = num(&key, value)?,
            "seed" => self.seed = num(&key, value)?,
            "out" => self.out = optional_path(value),
            "workers" => self.workers = num(&key, value)?,
            _ => return Err(format!("unknown key '{key}'")),
        }
        Ok(())
    }

    /// Applies a config text on top of `self`; `origin` names the source
    /// in diagnostics.
    pub fn apply_text(&mut self, text: &str, origin: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |msg: String| CliError::Config(format!("{origin}:{}: {msg}", i + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| at(format!("expected key = value, got '{line}'")))?;
            self.set(key, value).map_err(at)?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        self.apply_text(&text, &path.display().to_string())
    }

    /// Canonical text form; [`apply_text`](Self::apply_text) on a default
    /// config reproduces `self` exactly.
    pub fn to_config_string(&self) -> String {
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("metric", self.metric.name().into());
        kv("scenario", self.scenario.name().into());
        kv("lambda-bs", self.lambda_bs.to_string());
        kv("power", self.power.to_string());
        kv("eta", self.eta.to_string());
        kv("noise", self.noise.to_string());
        kv("r0", self.r0.to_string());
        kv("threshold-db", self.threshold_db.to_string());
        kv("reuse", self.reuse.to_string());
        kv("load", self.load.to_string());
        kv("nakagami-m", self.nakagami_m.to_string());
        kv("antennas", self.antennas.to_string());
        kv("comp-n", self.comp_n.to_string());
        kv("rho", self.rho.to_string());
        kv("tiers", path(&self.tiers));
        kv("mod", self.modulation.clone());
        kv("signaling", self.signaling.name().into());
        kv("x", self.x.to_string());
        kv("ks-reference", self.ks_reference.name().into());
        kv("sweep", self.sweep.as_ref().map(Sweep::to_string).unwrap_or_default());
        kv("simulate", self.simulate.to_string());
        kv("realizations", self.realizations.to_string());
        kv("symbols", self.symbols.to_string());
        kv("seed", self.seed.to_string());
        kv("out", path(&self.out));
        kv("workers", self.workers.to_string());
        s
    }

    /// Value of a sweepable key, in its configuration units.
    pub fn get(&self, key: &str) -> Option<f64> {
        Some(match canonical_key(key).as_str() {
            "threshold-db" => self.threshold_db,
            "r0" => self.r0,
            "lambda-bs" => self.lambda_bs,
            "power" => self.power,
            "eta" => self.eta,
            "noise" => self.noise,
            "reuse" => self.reuse as f64,
            "load" => self.load,
            "nakagami-m" => self.nakagami_m as f64,
            "antennas" => self.antennas as f64,
            "comp-n" => self.comp_n as f64,
            "rho" => self.rho,
            "x" => self.x,
            _ => return None,
        })
    }

    /// Copy of `self` with a sweepable key set to `v`.
    pub fn with_value(&self, key: &str, v: f64) -> Result<Self> {
        let mut c = self.clone();
        c.set(key, &v.to_string()).map_err(|e| CliError::Config(format!("sweep: {e}")))?;
        Ok(c)
    }

    /// The swept variable, or the metric's natural abscissa without a sweep.
    pub fn abscissa(&self) -> &str {
        match &self.sweep {
            Some(s) => &s.var,
            None => match self.metric {
                Metric::Outage => "threshold-db",
                Metric::Asep | Metric::Ks => "r0",
                Metric::Rate => "lambda-bs",
                Metric::InterferencePdf => "x",
            },
        }
    }

    pub fn network(&self) -> Result<NetworkConfig> {
        let r0 = if self.scenario == ScenarioKind::FixedR0 || self.scenario == ScenarioKind::Nakagami {
            self.r0
        } else {
            0.0
        };
        NetworkConfig::new(self.lambda_bs * PER_KM2, self.power, self.eta, self.noise, r0)
            .map_err(|e| CliError::Config(field_error(&e.to_string())))
    }

    /// Checks every field that the chosen metric and scenario consume.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(CliError::Config(m));
        self.network()?;
        let uses_r0 = matches!(self.scenario, ScenarioKind::FixedR0 | ScenarioKind::Nakagami) || self.metric == Metric::Ks;
        if uses_r0 && !(self.r0 > 0.0 && self.r0.is_finite()) {
            return bad(format!("r0: must be positive, got {}", self.r0));
        }
        if self.reuse == 0 {
            return bad("reuse: must be ≥ 1".into());
        }
        if !(0.0..=1.0).contains(&self.load) {
            return bad(format!("load: must lie in [0, 1], got {}", self.load));
        }
        if self.nakagami_m == 0 || self.antennas == 0 || self.comp_n == 0 {
            return bad("nakagami-m, antennas and comp-n must be ≥ 1".into());
        }
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return bad(format!("rho: must be positive, got {}", self.rho));
        }
        if self.realizations == 0 || self.symbols == 0 {
            return bad("realizations and symbols must be ≥ 1".into());
        }
        if self.scenario == ScenarioKind::Multitier && self.tiers.is_none() {
            return bad("tiers: the multitier scenario needs a tier file".into());
        }
        if let Some(s) = &self.sweep {
            s.check().map_err(CliError::Config)?;
            for v in s.grid() {
                self.with_value(&s.var, v)?.network()?;
            }
        }
        sgcell::ModulationScheme::parse(&self.modulation).map_err(|e| CliError::Config(format!("mod: {e}")))?;
        Ok(())
    }

    /// Tier table from [`tiers`](Self::tiers), intensities converted to per m².
    pub fn load_tiers(&self) -> Result<TierSet> {
        let path = self
            .tiers
            .as_ref()
            .ok_or_else(|| CliError::Config("tiers: no tier file given".into()))?;
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        parse_tiers(&text, &path.display().to_string())
    }
}

/// Names the offending field in a core validation message.
fn field_error(msg: &str) -> String {
    for field in ["eta", "lambda_bs", "power", "noise", "exclusion radius"] {
        if msg.contains(field) {
            let key = match field {
                "lambda_bs" => "lambda-bs",
                "exclusion radius" => "r0",
                f => f,
            };
            return format!("{key}: {msg}");
        }
    }
    msg.to_string()
}

/// `lambda(BS/km²) power bias eta` rows, whitespace- or comma-separated.
pub fn parse_tiers(text: &str, origin: &str) -> Result<TierSet> {
    let mut tiers = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |msg: String| CliError::Config(format!("{origin}:{}: {msg}", i + 1));
        let v: Vec<f64> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<f64>().map_err(|_| at(format!("'{s}' is not a number"))))
            .collect::<Result<_>>()?;
        let [lambda, power, bias, eta] = v[..] else {
            return Err(at(format!("expected 4 columns (lambda power bias eta), got {}", v.len())));
        };
        tiers.push(Tier {
            lambda: lambda * PER_KM2,
            power,
            bias,
            eta,
        });
    }
    TierSet::new(tiers).map_err(|e| CliError::Config(format!("{origin}: {e}")))
}
