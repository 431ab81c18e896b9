use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments or an input document that cannot be used.
    #[error("{0}")]
    Usage(String),
    /// A well-formed request the engine cannot satisfy.
    #[error("{0}")]
    Domain(String),
    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Usage(_) | CliError::Output { .. } => 2,
        }
    }

    pub fn domain(err: impl std::fmt::Display) -> Self {
        CliError::Domain(err.to_string())
    }
}

/// A document failed validation at a JSON-pointer location.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pointer}: {message}")]
pub struct DocumentError {
    pub pointer: String,
    pub message: String,
    /// 1-based line and column, known for syntax and type errors.
    pub position: Option<(usize, usize)>,
}

impl DocumentError {
    pub fn at(pointer: impl Into<String>, message: impl std::fmt::Display) -> Self {
        DocumentError {
            pointer: pointer.into(),
            message: message.to_string(),
            position: None,
        }
    }

    pub fn in_file(self, path: &Path) -> CliError {
        let location = match self.position {
            Some((line, column)) => format!("{}:{line}:{column}", path.display()),
            None => path.display().to_string(),
        };
        CliError::Usage(format!("{location}: {self}"))
    }
}
