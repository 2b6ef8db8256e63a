use thiserror::Error;

/// Input and usage errors; all map to exit status 2.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("malformed scenario at line {line}, column {column}: {message}")]
    Format {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error("field {field}: {message}")]
    Field { field: String, message: String },
    #[error("check {check} requires {needs}")]
    MissingField { check: String, needs: String },
    #[error("unknown check {name:?}; valid checks: {}", valid.join(", "))]
    UnknownCheck { name: String, valid: Vec<String> },
    #[error("unknown demo {name:?}; available: {}", valid.join(", "))]
    UnknownDemo { name: String, valid: Vec<String> },
    #[error("sampling: {0}")]
    Sampling(String),
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
