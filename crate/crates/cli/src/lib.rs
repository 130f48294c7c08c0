//! Batch front-end for `sgcell`: experiment configuration, parameter
//! sweeps, Monte-Carlo columns and CSV output.
//!
//! ```text
//! sgcell outage --scenario random-r0 --sweep threshold-db:-10:10:21 --simulate --realizations 100000
//! sgcell asep --scenario fixed-r0 --mod 4qam --sweep r0:100:500:5 --out fig9.csv
//! sgcell validate --realizations 20000
//! ```
//!
//! Exit status: 0 on success, 2 for configuration errors, 3 for numerical
//! failures (including failed oracle checks).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod app;
pub mod config;
pub mod error;
pub mod experiment;
pub mod output;
pub mod validate;

pub use app::{run, Cli};
pub use config::ExperimentConfig;
pub use error::{CliError, Result};
pub use experiment::{run_experiment, McPoint, Row};
