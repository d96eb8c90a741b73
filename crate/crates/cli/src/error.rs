use std::path::PathBuf;

/// Failure of a CLI run, mapped onto the process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("io: {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("io: {0}")]
    Data(String),
    #[error("numerical: {0}")]
    Numerical(String),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io { .. } | CliError::Data(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    /// The message flattened onto one line.
    pub fn one_line(&self) -> String {
        self.to_string()
            .split_whitespace()
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl From<upspec::Error> for CliError {
    fn from(e: upspec::Error) -> Self {
        use upspec::Error;
        match e {
            Error::InvalidInput(_) => CliError::Usage(e.to_string()),
            Error::ShapeMismatch { .. } => CliError::Data(e.to_string()),
            Error::NonReal { .. } | Error::Divergence { .. } | Error::Numerical(_) => {
                CliError::Numerical(e.to_string())
            }
        }
    }
}
