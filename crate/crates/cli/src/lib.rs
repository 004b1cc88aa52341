//! File formats, reports and subcommands of the `doa` tool.

pub mod commands;
pub mod error;
pub mod format;
pub mod report;
pub mod tolerances;

pub use error::{exit, CliError, Result};
