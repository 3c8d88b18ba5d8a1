use std::fmt;

/// Failure classes, each with its own process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or configuration; exit code 1.
    Validation(String),
    /// Failure while running; exit code 2.
    Runtime(String),
    /// `--check` found a failed acceptance criterion; exit code 3.
    CheckFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Runtime(_) => 2,
            CliError::CheckFailed(_) => 3,
        }
    }

    /// Adds context in front of the message, keeping the class.
    pub fn context(self, what: impl fmt::Display) -> Self {
        match self {
            CliError::Validation(m) => CliError::Validation(format!("{what}: {m}")),
            CliError::Runtime(m) => CliError::Runtime(format!("{what}: {m}")),
            CliError::CheckFailed(m) => CliError::CheckFailed(format!("{what}: {m}")),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Runtime(m) => write!(f, "runtime error: {m}"),
            CliError::CheckFailed(m) => write!(f, "check failed: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<pclocal::Error> for CliError {
    fn from(e: pclocal::Error) -> Self {
        use pclocal::Error as E;
        match e {
            E::InvalidVertex { .. }
            | E::InvalidEdge(..)
            | E::ParallelEdge(..)
            | E::InvalidParameter { .. }
            | E::InvalidSet(_)
            | E::Region(_)
            | E::RadiusMismatch(..)
            | E::BeyondTreeRadius { .. }
            | E::NotAdjacent(..)
            | E::NotRegular
            | E::Disconnected
            | E::Unsupported(_)
            | E::Parse { .. }
            | E::TooLarge { .. } => CliError::Validation(e.to_string()),
            E::AttemptsExhausted(_) | E::NoConvergence { .. } | E::Io(_) | E::Json(_) => {
                CliError::Runtime(e.to_string())
            }
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}
