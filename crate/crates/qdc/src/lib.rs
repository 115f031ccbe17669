//! File formats and the command-line front end for the `qdc-core`
//! simulator.

pub mod cli;
pub mod config;
pub mod error;
pub mod io;
pub mod surface;

pub use error::{CliError, CliResult};
