//! Monte-Carlo oracle for the analytical modules.
//!
//! Every realization draws from its own stream keyed by (seed, index), and
//! realizations are mapped in parallel with order-preserving collection, so
//! results are bit-identical for any number of worker threads.

pub mod downlink;
pub mod empirical;
pub mod rng;
pub mod symbols;
pub mod uplink;

pub use downlink::{simulate_downlink_field, simulate_links, simulate_lt, simulate_rate, simulate_sinr};
pub use empirical::{EmpiricalDistribution, MeanEstimate};
pub use symbols::{simulate_symbol_errors, SepEstimate};
pub use uplink::{simulate_uplink, simulate_uplink_placed, UePlacement};

use crate::error::{Error, Result};
use crate::geometry::TierSet;

/// Network scenario reproduced by a simulation.
#[derive(Debug, Clone, PartialEq)]
pub enum Scenario {
    /// Serving BS at the configured r₀, interferers outside it.
    FixedR0,
    /// Nearest-BS association.
    RandomR0,
    /// Each interferer active with probability p.
    LoadAware { p: f64 },
    /// Biased RSS association over several tiers.
    Multitier(TierSet),
    /// Coordinated reuse: the Δ−1 BSs nearest to the user stay silent,
    /// every farther BS uses the user's sub-band with probability 1/Δ.
    Reuse { delta: usize },
    /// One channel-inverted UE per cell, received level ρ at its BS.
    Uplink { rho: f64 },
    /// Fixed r₀ with unit-mean Nakagami-m power fading on every link.
    Nakagami { m: u32 },
    /// MRC over `antennas` receive antennas, optionally with reuse.
    Mrc { antennas: u32, delta: usize },
    /// Non-coherent joint transmission from the n nearest BSs.
    Comp { n: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationPlan {
    pub scenario: Scenario,
    pub realizations: usize,
    pub symbols_per_realization: usize,
    pub seed: u64,
    /// Outer radius of the simulated network; `None` applies the default
    /// truncation rule of each simulator.
    pub outer_radius: Option<f64>,
}

impl SimulationPlan {
    pub fn new(scenario: Scenario, realizations: usize, seed: u64) -> Self {
        Self {
            scenario,
            realizations,
            symbols_per_realization: 1,
            seed,
            outer_radius: None,
        }
    }

    pub fn with_symbols(mut self, symbols_per_realization: usize) -> Self {
        self.symbols_per_realization = symbols_per_realization;
        self
    }

    pub fn with_outer_radius(mut self, radius: f64) -> Self {
        self.outer_radius = Some(radius);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.realizations == 0 || self.symbols_per_realization == 0 {
            return Err(Error::Validation("a simulation needs at least one realization and one symbol".into()));
        }
        if let Some(r) = self.outer_radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::Validation(format!("outer radius must be positive, got {r}")));
            }
        }
        match &self.scenario {
            Scenario::LoadAware { p } if !(0.0..=1.0).contains(p) => {
                Err(Error::Validation(format!("access probability must lie in [0, 1], got {p}")))
            }
            Scenario::Reuse { delta: 0 } | Scenario::Mrc { delta: 0, .. } => {
                Err(Error::Validation("reuse factor must be ≥ 1".into()))
            }
            Scenario::Uplink { rho } if !(*rho > 0.0) => {
                Err(Error::Validation(format!("uplink power-control level must be positive, got {rho}")))
            }
            Scenario::Nakagami { m: 0 } => Err(Error::Validation("Nakagami m must be ≥ 1".into())),
            Scenario::Mrc { antennas: 0, .. } => Err(Error::Validation("MRC needs at least one antenna".into())),
            Scenario::Comp { n: 0 } => Err(Error::Validation("joint transmission needs n ≥ 1".into())),
            _ => Ok(()),
        }
    }
}

/// One simulated link: useful mean received power, its fading gain, and
/// the aggregate interference power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkSample {
    pub signal: f64,
    pub gain: f64,
    pub interference: f64,
}

impl LinkSample {
    pub fn sinr(&self, noise: f64) -> f64 {
        self.signal * self.gain / (self.interference + noise)
    }
}
