//! The operational shell around the `searchstop` library: named instance
//! generators, experiment configuration, a parallel replication runner with
//! CSV and SVG output, and the CLI plumbing.

pub mod config;
pub mod csvio;
mod error;
pub mod experiment;
pub mod instances;
pub mod plot;

pub use error::CliError;

pub type Result<T> = std::result::Result<T, CliError>;
