//! Config ingestion, task dispatch, and machine-readable reports for the
//! Finsler surface library.

pub mod config;
pub mod report;
pub mod run;

pub use config::{parse_config, serialize_config, ConfigError, RunConfig};
pub use run::{execute, run_to_dir, RunOutcome};
