//! Delimited-text ingestion and serialization, run configuration and the
//! drivers behind the `ftsboot` subcommands.
//!
//! Samples are written one curve per row under a header of grid points.
//! Surfaces are written as a `p x p` block whose first column holds `u` and
//! whose header holds `s`. Numbers use the shortest decimal form that parses
//! back to the same `f64`, so every write-then-read is lossless. Each output
//! is paired with a JSON sidecar echoing the resolved configuration.

mod commands;
mod config;
mod format;
mod ingest;

pub use commands::{cmd_bootstrap, cmd_estimate, cmd_experiment, cmd_ingest, cmd_simulate, CommandOutput};
pub use config::RunConfig;
pub use format::{
    read_sample, read_surface, write_json, write_sample, write_surface, write_vector,
};
pub use ingest::{ingest, ColumnRef, IngestResult, IngestSpec, MissingPolicy};
