use std::fmt;
use std::io;
use std::path::Path;

use stabscope::Error;

/// Front-end failure, classified by exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
    Cap(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Cap(_) => 3,
        }
    }

    pub fn io(path: &Path, err: io::Error) -> Self {
        CliError::Input(format!("{}: {err}", path.display()))
    }

    /// Attach a file name to a library error.
    pub fn in_file(path: &Path, err: Error) -> Self {
        match err {
            Error::Parse { line, column, message } => {
                CliError::Input(format!("{}:{line}:{column}: {message}", path.display()))
            }
            other => match CliError::from(other) {
                CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
                e => e,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Input(m) | CliError::Cap(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let msg = err.to_string();
        match err {
            Error::CapExceeded { .. } | Error::IterationCap { .. } => CliError::Cap(msg),
            Error::InvalidParameter(_) | Error::InvalidQubitCount(_) => CliError::Usage(msg),
            _ => CliError::Input(msg),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(err: io::Error) -> Self {
        CliError::Input(err.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(err: csv::Error) -> Self {
        CliError::Input(err.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(err: serde_json::Error) -> Self {
        CliError::Input(err.to_string())
    }
}
