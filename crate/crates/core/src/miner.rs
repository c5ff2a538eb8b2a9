//! TODO comment mining: extraction from source trivia, normalization, cue
//! word filtering and template-based trigger/action splitting.

use std::path::Path;
use std::sync::LazyLock;

use rayon::prelude::*;
use regex::Regex;
use serde::Serialize;

use crate::error::LoadError;
use crate::model::read_tree;
use crate::syntax::lexer::{tokenize, TriviaKind};

pub const MARKER: &str = "TODO";
pub const CUE_WORDS: [&str; 5] = ["if", "when", "once", "as", "then"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Split {
    pub trigger: String,
    pub action: String,
    /// 1-based index into [`TEMPLATES`].
    pub template: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommentRecord {
    pub file: String,
    pub line: u32,
    pub raw_text: String,
    pub normalized_text: String,
    pub cue_words_found: Vec<String>,
    pub split: Option<Split>,
}

/// One JSON Lines row of `trigit mine`.
#[derive(Debug, Serialize)]
pub struct RecordJson<'a> {
    pub file: &'a str,
    pub line: u32,
    pub raw: &'a str,
    pub text: &'a str,
    pub cues: &'a [String],
    pub trigger: Option<&'a str>,
    pub action: Option<&'a str>,
    pub template: Option<usize>,
}

impl CommentRecord {
    pub fn to_json(&self) -> RecordJson<'_> {
        RecordJson {
            file: &self.file,
            line: self.line,
            raw: &self.raw_text,
            text: &self.normalized_text,
            cues: &self.cue_words_found,
            trigger: self.split.as_ref().map(|s| s.trigger.as_str()),
            action: self.split.as_ref().map(|s| s.action.as_str()),
            template: self.split.as_ref().map(|s| s.template),
        }
    }
}

/// `(line, text)` of every comment in `source`. Uses the lexer's trivia; a
/// file the lexer rejects is scanned directly.
pub fn comments(source: &str) -> Vec<(u32, String)> {
    match tokenize(source, "") {
        Ok(tokens) => tokens
            .iter()
            .flat_map(|t| &t.leading)
            .filter(|t| t.kind != TriviaKind::Whitespace)
            .map(|t| (t.span.start_line, t.text.clone()))
            .collect(),
        Err(_) => scan_comments(source),
    }
}

fn scan_comments(source: &str) -> Vec<(u32, String)> {
    let b = source.as_bytes();
    let mut out = Vec::new();
    let mut line = 1;
    let mut i = 0;
    while i < b.len() {
        match b[i] {
            b'\n' => line += 1,
            q @ (b'"' | b'\'') => {
                i += 1;
                while i < b.len() && b[i] != q && b[i] != b'\n' {
                    if b[i] == b'\\' {
                        i += 1;
                    }
                    i += 1;
                }
                if i < b.len() && b[i] == b'\n' {
                    line += 1;
                }
            }
            b'/' if b.get(i + 1) == Some(&b'/') => {
                let end = source[i..].find('\n').map_or(b.len(), |n| i + n);
                out.push((line, source[i..end].to_string()));
                i = end;
                continue;
            }
            b'/' if b.get(i + 1) == Some(&b'*') => {
                let end = source[i + 2..].find("*/").map_or(b.len(), |n| i + 2 + n + 2);
                out.push((line, source[i..end].to_string()));
                line += source[i..end].matches('\n').count() as u32;
                i = end;
                continue;
            }
            _ => {}
        }
        i += 1;
    }
    out
}

fn strip_comment_syntax(text: &str) -> String {
    let t = text.trim();
    if let Some(rest) = t.strip_prefix("//") {
        return rest.trim_start_matches('/').to_string();
    }
    if let Some(rest) = t.strip_prefix("/*") {
        let body = rest.strip_suffix("*/").unwrap_or(rest);
        return body
            .lines()
            .map(|l| l.trim_start().trim_start_matches('*'))
            .collect::<Vec<_>>()
            .join(" ");
    }
    t.to_string()
}

static ATTRIBUTION: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^\s*\([^)]*\)").unwrap());

fn strip_marker(text: &str) -> &str {
    let mut t = text.trim_start();
    while let Some(rest) = t.strip_prefix(MARKER) {
        t = rest.trim_start();
        if let Some(m) = ATTRIBUTION.find(t) {
            t = t[m.end()..].trim_start();
        }
        t = t.strip_prefix([':', '-']).unwrap_or(t).trim_start();
    }
    t
}

fn normalize_step(text: &str) -> String {
    let stripped = strip_comment_syntax(text);
    let collapsed = stripped.split_whitespace().collect::<Vec<_>>().join(" ");
    strip_marker(&collapsed).trim().to_string()
}

/// Drops comment syntax, the leading marker with its attribution and
/// separator, and collapses whitespace. Applied until nothing changes, so
/// the result is a fixed point.
pub fn normalize(raw: &str) -> String {
    let mut cur = normalize_step(raw);
    loop {
        let next = normalize_step(&cur);
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// Cue words occurring as whole words, lowercased, in order of occurrence.
pub fn cue_words(text: &str) -> Vec<String> {
    text.split(|c: char| !(c.is_alphanumeric() || c == '_'))
        .map(str::to_lowercase)
        .filter(|w| CUE_WORDS.contains(&w.as_str()))
        .collect()
}

/// Trigger/action split templates in priority order; `render` rebuilds the
/// text from the two segments.
pub struct Template {
    pub shape: &'static str,
    regex: Regex,
}

impl Template {
    pub fn render(&self, trigger: &str, action: &str) -> String {
        self.shape.replace("<T>", trigger).replace("<A>", action)
    }
}

fn template(shape: &'static str) -> Template {
    let mut pat = String::from("(?i)^");
    let mut rest = shape;
    while !rest.is_empty() {
        if let Some(r) = rest.strip_prefix("<T>") {
            pat.push_str("(?P<t>.+?)");
            rest = r;
        } else if let Some(r) = rest.strip_prefix("<A>") {
            pat.push_str("(?P<a>.+?)");
            rest = r;
        } else {
            let next = rest.find('<').unwrap_or(rest.len());
            let lit = &rest[..next];
            for (i, word) in lit.split(' ').enumerate() {
                if i > 0 {
                    pat.push_str(r"\s+");
                }
                pat.push_str(&regex::escape(word));
            }
            rest = &rest[next..];
        }
    }
    pat.push('$');
    Template {
        shape,
        regex: Regex::new(&pat).unwrap(),
    }
}

pub static TEMPLATES: LazyLock<Vec<Template>> = LazyLock::new(|| {
    [
        "if <T>, then <A>",
        "if <T>, <A>",
        "if <T> then <A>",
        "<A> if <T>",
        "when <T>, <A>",
        "<A> when <T>",
        "once <T>, <A>",
        "<A> once <T>",
        "<A> as soon as <T>",
        "<T>, then <A>",
    ]
    .into_iter()
    .map(template)
    .collect()
});

/// First template matching `text` with two non-empty segments.
pub fn split_trigger_action(text: &str) -> Option<Split> {
    TEMPLATES.iter().enumerate().find_map(|(i, t)| {
        let c = t.regex.captures(text)?;
        let trigger = c["t"].trim();
        let action = c["a"].trim();
        (!trigger.is_empty() && !action.is_empty()).then(|| Split {
            trigger: trigger.to_string(),
            action: action.to_string(),
            template: i + 1,
        })
    })
}

/// Records for every comment containing the marker, normalized, with cue
/// words and split filled in.
pub fn records_for_file(path: &str, source: &str) -> Vec<CommentRecord> {
    comments(source)
        .into_iter()
        .filter(|(_, text)| text.contains(MARKER))
        .map(|(line, raw)| {
            let normalized_text = normalize(&raw);
            let cue_words_found = cue_words(&normalized_text);
            let split = if cue_words_found.is_empty() {
                None
            } else {
                split_trigger_action(&normalized_text)
            };
            CommentRecord {
                file: path.to_string(),
                line,
                raw_text: raw.split_whitespace().collect::<Vec<_>>().join(" "),
                normalized_text,
                cue_words_found,
                split,
            }
        })
        .collect()
}

/// All TODO comments under `root`, ordered by file and line.
pub fn extract_todos(root: &Path) -> Result<Vec<CommentRecord>, LoadError> {
    let files = read_tree(root)?;
    Ok(files
        .par_iter()
        .filter(|(p, _)| p.ends_with(".java"))
        .flat_map_iter(|(p, s)| records_for_file(p, s))
        .collect())
}

/// Records with at least one cue word.
pub fn filter_by_cue_words(records: Vec<CommentRecord>) -> Vec<CommentRecord> {
    records
        .into_iter()
        .filter(|r| !r.cue_words_found.is_empty())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize("// TODO (pynie): fix this"), "fix this");
        assert_eq!(normalize("/* TODO */"), "");
        assert_eq!(normalize("// TODO- remove once merged"), "remove once merged");
        assert_eq!(normalize("/** TODO x\n * y */"), "x y");
        assert_eq!(normalize("//TODO(user): TODO: twice"), "twice");
        assert_eq!(
            normalize("    /** TODO: make this protected once Mapper and FieldMapper\n     * are merged together */"),
            "make this protected once Mapper and FieldMapper are merged together"
        );
    }

    #[test]
    fn marker_is_case_sensitive() {
        let src = "class A {\n  // FIXME: x\n  // todo later\n  /** TODO x\n   * y */\n  int a; // TODO: when done, go\n}\n";
        let r = records_for_file("A.java", src);
        assert_eq!(r.len(), 2);
        assert_eq!((r[0].line, r[0].normalized_text.as_str()), (4, "x y"));
        assert_eq!(r[1].line, 6);
        assert_eq!(
            r[1].split,
            Some(Split {
                trigger: "done".into(),
                action: "go".into(),
                template: 5
            })
        );
    }

    #[test]
    fn cue_words_whole_word_only() {
        assert_eq!(
            cue_words("Remove this guard once lazyStackTrace() works in Java 9."),
            vec!["once"]
        );
        assert!(cue_words("refactor later").is_empty());
        assert!(cue_words("increase ONCE_LIMIT").is_empty());
        assert_eq!(cue_words("If x, THEN y as"), vec!["if", "then", "as"]);
    }

    #[test]
    fn split_examples() {
        let s = split_trigger_action("Remove this guard once lazyStackTrace() works in Java 9.").unwrap();
        assert_eq!(s.action, "Remove this guard");
        assert_eq!(s.trigger, "lazyStackTrace() works in Java 9.");
        assert_eq!(TEMPLATES[s.template - 1].shape, "<A> once <T>");
        let s = split_trigger_action("if X, then Y").unwrap();
        assert_eq!((s.trigger.as_str(), s.action.as_str(), s.template), ("X", "Y", 1));
        assert_eq!(split_trigger_action("as discussed above"), None);
        assert_eq!(split_trigger_action("A, then B").unwrap().template, 10);
        assert_eq!(split_trigger_action("use it as soon as ready").unwrap().template, 9);
    }

    #[test]
    fn lexer_failure_falls_back_to_scan() {
        let src = "class A { String s = \"abc\n // TODO: x if y\n /* TODO z */ }";
        assert!(tokenize(src, "").is_err());
        let got = comments(src);
        assert_eq!(got.len(), 2);
        assert_eq!(got[0], (2, "// TODO: x if y".to_string()));
        assert_eq!(got[1].0, 3);
    }
}
