use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed document or value; `at` is the dotted path of the field.
    #[error("{at}: {message}")]
    Document { at: String, message: String },

    #[error(transparent)]
    Model(#[from] pyrohv::Error),

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn at(at: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Document {
            at: at.into(),
            message: message.into(),
        }
    }

    /// Dotted path to the offending config field, when there is one.
    pub fn field_path(&self) -> Option<String> {
        match self {
            CliError::Document { at, .. } => Some(at.clone()),
            CliError::Model(e) => e.field_path(),
            _ => None,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
