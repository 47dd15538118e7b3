//! Library surface of the command-line driver. All command bodies are pure
//! functions from a [`config::RunConfig`] to output text, so the binary and
//! the test suites share one code path.

pub mod commands;
pub mod config;
pub mod svg;

pub use commands::{CliError, SweepAxis};
pub use config::RunConfig;
