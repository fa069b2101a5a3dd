use std::fmt;

/// Exit status for input and usage errors.
pub const EXIT_INPUT: i32 = 1;
/// Exit status when a fit did not converge.
pub const EXIT_NOT_CONVERGED: i32 = 2;

/// A failure carrying the process exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self { code: EXIT_INPUT, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<tlscale_core::Error> for CliError {
    fn from(e: tlscale_core::Error) -> Self {
        Self::input(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::input(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
