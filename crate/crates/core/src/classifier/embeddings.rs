//! Word vectors in the word2vec text format.

use std::collections::HashMap;
use std::path::Path;

use crate::error::ClassifierError;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Embeddings {
    pub dim: usize,
    pub table: HashMap<String, Vec<f64>>,
    pub warnings: Vec<String>,
}

impl Embeddings {
    pub fn get(&self, word: &str) -> Option<&[f64]> {
        self.table.get(&word.to_lowercase()).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Parses `word v1 .. vD` rows, optionally preceded by a `count D`
    /// header. Words are stored lowercased; a repeated word keeps its last
    /// vector.
    pub fn parse(path: &str, text: &str) -> Result<Embeddings, ClassifierError> {
        let err = |line: usize, message: String| ClassifierError::Format {
            path: path.to_string(),
            line,
            message,
        };
        let mut out = Embeddings::default();
        let mut dim = None;
        for (i, line) in text.lines().enumerate() {
            let n = i + 1;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            if n == 1 && fields.len() == 2 {
                if let (Ok(_), Ok(d)) = (fields[0].parse::<usize>(), fields[1].parse::<usize>()) {
                    dim = Some(d);
                    continue;
                }
            }
            let values = fields[1..]
                .iter()
                .map(|f| f.parse::<f64>())
                .collect::<Result<Vec<f64>, _>>()
                .map_err(|e| err(n, format!("bad number: {e}")))?;
            match dim {
                None => dim = Some(values.len()),
                Some(d) if d != values.len() => {
                    return Err(err(n, format!("expected {d} values, found {}", values.len())))
                }
                _ => {}
            }
            if values.is_empty() {
                return Err(err(n, "row has no values".into()));
            }
            let word = fields[0].to_lowercase();
            if out.table.insert(word.clone(), values).is_some() {
                out.warnings
                    .push(format!("{path}:{n}: duplicate word `{word}`, keeping the later vector"));
            }
        }
        out.dim = dim.unwrap_or(0);
        Ok(out)
    }

    pub fn load(path: &Path) -> Result<Embeddings, ClassifierError> {
        let text = std::fs::read_to_string(path).map_err(|source| ClassifierError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Embeddings::parse(&path.display().to_string(), &text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_and_without_header() {
        let e = Embeddings::parse("e", "java 1 2 3\nJDK 0.5 0 -1\n").unwrap();
        assert_eq!((e.len(), e.dim), (2, 3));
        assert_eq!(e.get("Java"), Some(&[1.0, 2.0, 3.0][..]));
        assert_eq!(e.get("jdk"), Some(&[0.5, 0.0, -1.0][..]));
        let mut text = String::from("1000 100\n");
        text.push_str("w");
        text.push_str(&" 0.1".repeat(100));
        let e = Embeddings::parse("e", &text).unwrap();
        assert_eq!(e.dim, 100);
    }

    #[test]
    fn ragged_and_duplicate_rows() {
        let r = Embeddings::parse("e.txt", "a 1 2\nb 1\n");
        assert!(matches!(r, Err(ClassifierError::Format { line: 2, .. })));
        let e = Embeddings::parse("e", "a 1 2\nA 3 4\n").unwrap();
        assert_eq!(e.get("a"), Some(&[3.0, 4.0][..]));
        assert_eq!(e.warnings.len(), 1);
    }
}
