//! Experiment runner, file formats and command line for `copylink-core`.

pub mod cli;
pub mod config;
pub mod error;
pub mod fit;
pub mod io;
pub mod manifest;
pub mod report;
pub mod run;
pub mod walk;

pub use error::{CliError, CliResult};
