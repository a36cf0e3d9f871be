use std::fmt;
use std::process::ExitCode;

use nsbox::Error;

/// Failure with its exit code: 2 for usage and parse errors, 3 for domain
/// violations.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(2),
            CliError::Domain(_) => ExitCode::from(3),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Domain(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Signaling | Error::InvalidBox(_) | Error::Degenerate | Error::ContextMismatch => {
                CliError::Domain(e.to_string())
            }
            Error::Weight(_) | Error::Range(_) | Error::Param(_) | Error::Parse(_) => CliError::Usage(e.to_string()),
        }
    }
}
