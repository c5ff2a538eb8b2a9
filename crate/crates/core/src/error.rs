use std::path::PathBuf;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("{file}:{line}:{column}: {message}")]
pub struct LexError {
    pub file: String,
    pub line: u32,
    pub column: u32,
    pub message: String,
    #[serde(skip)]
    pub offset: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("{file}:{line}:{column}: expected {expected}, found {found}")]
pub struct ParseError {
    pub file: String,
    pub line: u32,
    pub column: u32,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SyntaxError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl SyntaxError {
    pub fn file(&self) -> &str {
        match self {
            SyntaxError::Lex(e) => &e.file,
            SyntaxError::Parse(e) => &e.file,
        }
    }

    pub fn line(&self) -> u32 {
        match self {
            SyntaxError::Lex(e) => e.line,
            SyntaxError::Parse(e) => e.line,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("{path}: {reason}")]
pub struct ConfigError {
    pub path: String,
    pub reason: String,
}

/// Two edits claim the same bytes of a file.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("overlapping edits in {file} at bytes {start}..{end}")]
pub struct OverlapError {
    pub file: String,
    pub start: usize,
    pub end: usize,
}

/// A per-file problem found while loading a project.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum SourceError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{} file(s) could not be loaded", .0.len())]
    Invalid(Vec<SourceError>),
}

#[derive(Debug, Error)]
pub enum ClassifierError {
    #[error("dataset needs examples of both labels")]
    DegenerateDataset,
    #[error("the full configuration needs an embedding table")]
    MissingEmbeddings,
    #[error("{path}:{line}: {message}")]
    Format {
        path: String,
        line: usize,
        message: String,
    },
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Failure while interpreting a compiled query.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("{0} does not exist")]
    Missing(String),
    #[error("no build configuration declares a Java version")]
    NoBuildConfig,
    #[error("referenced trigger {0} cannot be evaluated")]
    Unevaluable(String),
    #[error("cyclic trigger reference through {0}")]
    Cycle(String),
    #[error("{0}")]
    Invalid(String),
}
