//! Unified diffs between original and edited sources.

use serde::Serialize;
use similar::TextDiff;

use super::edits::Edit;
use crate::error::OverlapError;
use crate::syntax::printer::{materialize, TextEdit};

pub const CONTEXT_LINES: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FilePatch {
    pub path: String,
    pub hunks: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Patch {
    pub text: String,
    pub files: Vec<FilePatch>,
}

impl Patch {
    pub fn is_empty(&self) -> bool {
        self.text.is_empty()
    }

    pub fn hunk_count(&self) -> usize {
        self.files.iter().map(|f| f.hunks).sum()
    }
}

/// Applies the edits of one file.
pub fn apply_edits(path: &str, original: &str, edits: &[&Edit]) -> Result<String, OverlapError> {
    let t: Vec<TextEdit> = edits
        .iter()
        .map(|e| TextEdit {
            range: e.range.clone(),
            text: e.replacement.clone(),
        })
        .collect();
    materialize(original, &t).map_err(|e| OverlapError {
        file: path.to_string(),
        ..e
    })
}

/// Diff of one file with `a/` and `b/` prefixed headers; empty when equal.
pub fn diff_file(path: &str, old: &str, new: &str) -> (String, usize) {
    if old == new {
        return (String::new(), 0);
    }
    let diff = TextDiff::from_lines(old, new);
    let mut unified = diff.unified_diff();
    unified
        .context_radius(CONTEXT_LINES)
        .header(&format!("a/{path}"), &format!("b/{path}"));
    let hunks = unified.iter_hunks().count();
    (unified.to_string(), hunks)
}

/// Renders a patch for `files` given as `(path, original text)`, in path
/// order. Files without edits are skipped.
pub fn render_patch(files: &[(&str, &str)], edits: &[Edit]) -> Result<Patch, OverlapError> {
    let mut sorted: Vec<&(&str, &str)> = files.iter().collect();
    sorted.sort_by_key(|f| f.0);
    let mut patch = Patch::default();
    for (path, original) in sorted {
        let mine: Vec<&Edit> = edits.iter().filter(|e| e.file == *path).collect();
        if mine.is_empty() {
            continue;
        }
        let new = apply_edits(path, original, &mine)?;
        let (text, hunks) = diff_file(path, original, &new);
        if hunks > 0 {
            patch.text.push_str(&text);
            patch.files.push(FilePatch {
                path: path.to_string(),
                hunks,
            });
        }
    }
    Ok(patch)
}
