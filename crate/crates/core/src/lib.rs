//! Interference, Laplace-transform and error-probability analysis of
//! Poisson cellular networks.
//!
//! The crate is organised bottom-up:
//!
//! | module | contents |
//! |---|---|
//! | [`numerics`] | special functions, semi-infinite quadrature, CF inversion, LT derivatives, KS distance |
//! | [`geometry`] | PPP sampling, distance distributions, cell load, multi-tier association |
//! | [`interference`] | characteristic functions, cumulants and EiD variances of the baseband aggregate interference |
//! | [`transforms`] | Laplace transforms of the interference power for every network scenario |
//! | [`metrics`] | ASEP, SINR outage and ergodic rate evaluators |
//! | [`simulator`] | the Monte-Carlo oracle that every closed form is checked against |
//!
//! All intensities are per m², powers in W, distances in m.

// `!(a > b)` is used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
pub mod interference;
pub mod metrics;
pub mod numerics;
pub mod simulator;
pub mod transforms;

pub use error::{Error, Result};
pub use geometry::{AnnularRegion, NetworkConfig, Tier, TierSet};
pub use interference::{Constellation, SignalingMode};
pub use metrics::ModulationScheme;
pub use transforms::LaplaceTransform;
