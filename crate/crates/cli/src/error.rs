use thiserror::Error;

/// Input problems; every variant maps to exit code 2.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("config syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("{field}: {message}")]
    Input { field: String, message: String },
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}
