//! File formats and the `tlscale` command line.

pub mod commands;
pub mod curves;
pub mod error;
pub mod format;
pub mod grid;
pub mod params;
pub mod presets;

pub use commands::run;
pub use error::{CliError, CliResult};
