use std::fmt;

use ablab::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_PRECISION: u8 = 3;
pub const EXIT_SEPARATION: u8 = 4;
pub const EXIT_INTERNAL: u8 = 5;

/// A failed run: exit code, the pipeline stage it died in, and the cause.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub stage: String,
    pub error: anyhow::Error,
}

impl CliError {
    pub fn new(code: u8, stage: &str, error: impl Into<anyhow::Error>) -> Self {
        CliError {
            code,
            stage: stage.to_owned(),
            error: error.into(),
        }
    }

    pub fn config(stage: &str, error: impl Into<anyhow::Error>) -> Self {
        Self::new(EXIT_CONFIG, stage, error)
    }

    pub fn internal(stage: &str, error: impl Into<anyhow::Error>) -> Self {
        Self::new(EXIT_INTERNAL, stage, error)
    }

    pub fn core(stage: &str, error: Error) -> Self {
        Self::new(exit_code(&error), stage, error)
    }

    /// One-line JSON for stderr.
    pub fn to_json(&self) -> String {
        serde_json::json!({
            "error": format!("{:#}", self.error),
            "stage": self.stage,
            "exit_code": self.code,
        })
        .to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {:#}", self.stage, self.error)
    }
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::DepthExceeded { .. }
        | Error::PrecisionExhausted(_)
        | Error::AmbiguousFold
        | Error::AmbiguousMembership { .. } => EXIT_PRECISION,
        Error::SeparationFailed { .. } | Error::WindowEmpty { .. } => EXIT_SEPARATION,
        Error::InvalidPattern(_)
        | Error::NotEnoughAlphas { .. }
        | Error::WordTooShort { .. }
        | Error::DegenerateSample(_)
        | Error::InadmissibleParams { .. }
        | Error::InvalidArgument(_)
        | Error::Parse(_) => EXIT_CONFIG,
    }
}
