//! Configuration, expression parsing and command dispatch for the `gradsym`
//! command-line tool.

pub mod config;
pub mod error;
pub mod expr;
pub mod run;

pub use config::{parse_config, render_config, Config};
pub use error::CliError;
pub use run::{run, Command, GenmetricOp, Options, Outcome, Suite};

/// Reads and parses a config file.
pub fn load_config(path: &str) -> Result<Config, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.into(), message: e.to_string() })?;
    parse_config(&text)
}
