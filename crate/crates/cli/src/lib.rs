//! Library side of the `oscdamp` command: configuration parsing, CSV
//! formatting and the runs behind each subcommand.

// Negated comparisons are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod csv;
pub mod run;

pub use config::{ConfigError, ModelChoice, Output, RunConfig};
pub use csv::Table;
pub use run::{run_evolve, run_steady_sweep, validate, Engine, RunError};
