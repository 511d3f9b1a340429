//! Ingestion, configuration, reports and plots for the `subtraj` binary.

pub mod ingest;
pub mod report;
pub mod svg;

pub use ingest::{ingest, parse, serialize, Format, IngestError};
pub use report::{run, ConfigError, Mode, RunConfig, RunError, SolutionReport};
