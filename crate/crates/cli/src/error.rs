use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed scenario: {0}")]
    Parse(String),
    #[error("unsupported schema_version {found}; this build reads {supported}")]
    SchemaVersion { found: u32, supported: u32 },
    #[error("unknown experiment {0:?}; run `bosonic-ssr list` for the registry")]
    UnknownExperiment(String),
    #[error("experiment {experiment}: {message}")]
    InvalidParam { experiment: String, message: String },
    #[error("unknown format {0:?}; expected structured or table")]
    UnknownFormat(String),
    #[error("experiment failed: {0}")]
    Library(#[from] bosonic_ssr::Error),
}

impl CliError {
    /// 2 for anything wrong with the input, 1 for a run that could not finish.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Library(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
