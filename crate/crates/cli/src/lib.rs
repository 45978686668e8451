//! Command-line front end for `panfuse`.

pub mod batch;
pub mod chart;
pub mod commands;
pub mod error;
pub mod manifest;
pub mod records;

pub use commands::{run, Cli, Command};
pub use error::{exit, CliError, Result};
pub use manifest::{BatchManifest, BatchPlan, PairEntry};
