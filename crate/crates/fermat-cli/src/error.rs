//! CLI failures tagged by the pipeline stage that produced them; every
//! stage maps to a distinct process exit code so scripts can tell which
//! module's invariant broke.

use std::fmt;

/// The pipeline stage (or CLI concern) a failure belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Cm,
    Mt,
    Hodge,
    Moments,
    Frobenius,
    Cache,
    Config,
}

impl Stage {
    pub fn exit_code(self) -> i32 {
        match self {
            Stage::Cm => 10,
            Stage::Mt => 11,
            Stage::Hodge => 12,
            Stage::Moments => 13,
            Stage::Frobenius => 14,
            Stage::Cache => 15,
            Stage::Config => 16,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Stage::Cm => "cm-structure",
            Stage::Mt => "mt-projection",
            Stage::Hodge => "hodge-analysis",
            Stage::Moments => "sato-tate-moments",
            Stage::Frobenius => "frobenius-arithmetic",
            Stage::Cache => "cache",
            Stage::Config => "config",
        }
    }
}

/// A stage-tagged error; the message is already human-readable.
#[derive(Debug)]
pub struct CliError {
    pub stage: Stage,
    pub message: String,
}

impl CliError {
    pub fn new(stage: Stage, message: impl fmt::Display) -> Self {
        CliError { stage, message: message.to_string() }
    }

    pub fn config(message: impl fmt::Display) -> Self {
        CliError::new(Stage::Config, message)
    }

    pub fn cache(message: impl fmt::Display) -> Self {
        CliError::new(Stage::Cache, message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.stage.label(), self.message)
    }
}

impl std::error::Error for CliError {}

/// Tag the error side of a core `Result` with a stage.
pub trait StageExt<T> {
    fn stage(self, stage: Stage) -> Result<T, CliError>;
}

impl<T, E: fmt::Display> StageExt<T> for Result<T, E> {
    fn stage(self, stage: Stage) -> Result<T, CliError> {
        self.map_err(|e| CliError::new(stage, e))
    }
}
