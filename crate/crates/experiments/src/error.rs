use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = ExperimentError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("config field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("cannot read config file {path}: {source}")]
    ReadConfig { path: PathBuf, source: std::io::Error },

    #[error("cannot parse config file: {0}")]
    ParseConfig(#[from] toml::de::Error),

    #[error("unknown recipe `{0}`")]
    UnknownRecipe(String),

    #[error("{context}: {source}")]
    Model { context: String, source: nhchain::Error },

    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
}

impl ExperimentError {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        ExperimentError::Config { field: field.into(), message: message.into() }
    }

    /// Process exit code: 2 for configuration problems, 3 for numerical
    /// failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::Config { .. }
            | ExperimentError::ReadConfig { .. }
            | ExperimentError::ParseConfig(_)
            | ExperimentError::UnknownRecipe(_) => 2,
            ExperimentError::Model { source, .. } if source.is_numerical() => 3,
            ExperimentError::Model { source, .. } if is_input_error(source) => 2,
            _ => 1,
        }
    }
}

fn is_input_error(e: &nhchain::Error) -> bool {
    matches!(
        e,
        nhchain::Error::Capacity { .. }
            | nhchain::Error::EmptyChain
            | nhchain::Error::InvalidParams(_)
            | nhchain::Error::InvalidBipartition(_)
            | nhchain::Error::InvalidArgument(_)
            | nhchain::Error::Unknown { .. }
    )
}

/// Attaches a context string to core errors.
pub trait Context<T> {
    fn context(self, context: impl FnOnce() -> String) -> Result<T>;
}

impl<T> Context<T> for nhchain::Result<T> {
    fn context(self, context: impl FnOnce() -> String) -> Result<T> {
        self.map_err(|source| ExperimentError::Model { context: context(), source })
    }
}
