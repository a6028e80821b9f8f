//! Configuration, sweeps, figure data and run manifests for the `ghzbudget` binary.

pub mod config;
pub mod error;
pub mod figures;
pub mod manifest;
pub mod output;
pub mod sweep;

pub use error::{CliError, CliResult};
