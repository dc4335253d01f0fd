use thiserror::Error;

/// Process exit codes.
pub const EXIT_OK: u8 = 0;
pub const EXIT_PROPERTY_FAILURE: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_SCHEMA: u8 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("no {kind} named `{name}` in {path}")]
    UnknownName {
        kind: &'static str,
        name: String,
        path: String,
    },

    #[error("cannot read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },

    #[error("cannot write {path}: {source}")]
    Write {
        path: String,
        source: std::io::Error,
    },

    #[error("{path}: malformed document: {source}")]
    Parse {
        path: String,
        source: serde_json::Error,
    },

    #[error("{context}: {source}")]
    Invalid {
        context: String,
        source: qmeter_core::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_)
            | CliError::UnknownName { .. }
            | CliError::Read { .. }
            | CliError::Write { .. } => EXIT_USAGE,
            CliError::Parse { .. } => EXIT_SCHEMA,
            CliError::Invalid { source, .. } => match source {
                qmeter_core::Error::NotEfficient { .. } => EXIT_USAGE,
                qmeter_core::Error::InconsistentClassification(_) => EXIT_PROPERTY_FAILURE,
                _ => EXIT_SCHEMA,
            },
        }
    }

    pub fn invalid(context: impl Into<String>, source: qmeter_core::Error) -> Self {
        CliError::Invalid {
            context: context.into(),
            source,
        }
    }
}
