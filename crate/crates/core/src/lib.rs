//! Executable trigger-action comments for a Java-like source subset.
//!
//! Triggers are boolean query expressions over a project model built from
//! sources and build configuration; actions are source transformations that
//! are rendered as patches or transformed files once the triggers hold.

pub mod error;
pub mod syntax;
pub mod model;
pub mod frontend;
pub mod eval;
pub mod miner;
pub mod classifier;
pub mod complexity;
pub mod testgen;

pub use classifier::{Embeddings, Example, FeatureConfig, Hyper, Metrics};
pub use complexity::{token_complexity, TokenComplexity};
pub use error::{ClassifierError, EvalError, LoadError, SourceError, SyntaxError};
pub use eval::{
    evaluate_all, run, EditOrigin, EvalOptions, Mode, Patch, RunOutput, RunReport, Status,
    TriggerResult,
};
pub use frontend::ir::{EncodingError, ErrorCategory, TrigItUnit, UnitKind};
pub use frontend::{compile_project, Frontend};
pub use miner::{extract_todos, CommentRecord};
pub use model::{build_project_model, Location, Project, ProjectModel};
pub use syntax::ParsedFile;
