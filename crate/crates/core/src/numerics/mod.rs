//! Numerical kernels shared by the analytical modules.

pub mod derivative;
pub mod inversion;
pub mod ks;
pub mod quadrature;
pub mod special;

pub use derivative::lt_derivative;
pub use inversion::{gil_pelaez_cdf, gil_pelaez_density};
pub use ks::ks_distance;
pub use quadrature::{integrate_finite, integrate_semi_infinite, QuadratureSpec, TailPolicy};
pub use special::{eval_special, SpecialFunction};
