//! Library side of the `floodfreq` command-line tool: monthly-data ingestion,
//! seasonal aggregation, return levels and the subcommand implementations.

pub mod commands;
pub mod error;
pub mod ingest;
pub mod returns;
pub mod seasons;

pub use error::{CliError, CliResult};
