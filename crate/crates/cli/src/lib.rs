//! Batch runner for noisy cluster-state experiments: config handling,
//! sweeps, self-checks and CSV output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod figures;
pub mod output;
pub mod run;
pub mod verify;

pub use config::ExperimentConfig;
pub use error::CliError;
pub use figures::{figure, FigureOptions, FIGURES};
pub use output::Table;
pub use run::{run, Output};
