//! File formats, report writers, and the command-line driver for
//! `acng-core`.

pub mod cli;
pub mod error;
pub mod io;
pub mod report;

pub use error::{CliError, CliResult};
