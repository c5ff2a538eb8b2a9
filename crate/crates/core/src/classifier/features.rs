//! Feature vectors for (trigger, action) segment pairs.

use serde::{Deserialize, Serialize};

use super::embeddings::Embeddings;
use super::text::{special_class, tag_pos, tokenize, Tag, SPECIAL_CLASSES, TAGS};
use crate::error::ClassifierError;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureConfig {
    /// Everything except the word embeddings.
    Baseline,
    #[default]
    Full,
}

impl FeatureConfig {
    pub fn name(self) -> &'static str {
        match self {
            FeatureConfig::Baseline => "baseline",
            FeatureConfig::Full => "full",
        }
    }
}

/// Width of the non-embedding block of one segment.
pub const SEGMENT_DIMS: usize = 1 + TAGS.len() + SPECIAL_CLASSES.len();

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    /// Name of each dimension, e.g. `trigger.pos.NOUN` or `action.emb.3`.
    pub schema: Vec<String>,
}

pub fn schema(config: FeatureConfig, dim: usize) -> Vec<String> {
    let mut names = Vec::new();
    for seg in ["trigger", "action"] {
        names.push(format!("{seg}.tokens"));
        names.extend(TAGS.iter().map(|t| format!("{seg}.pos.{}", t.name())));
        names.extend(SPECIAL_CLASSES.iter().map(|c| format!("{seg}.special.{}", c.name())));
    }
    if config == FeatureConfig::Full {
        for seg in ["trigger", "action"] {
            names.extend((0..dim).map(|i| format!("{seg}.emb.{i}")));
        }
    }
    names
}

/// Count, POS-tag distribution and special-class frequencies, with tags
/// supplied by the caller.
pub fn segment_block_tagged(tokens: &[&str], tags: &[Tag]) -> Vec<f64> {
    let mut v = vec![0.0; SEGMENT_DIMS];
    let n = tokens.len();
    v[0] = n as f64;
    if n == 0 {
        return v;
    }
    for t in tags {
        v[1 + t.index()] += 1.0 / n as f64;
    }
    for tok in tokens {
        let c = special_class(tok);
        if let Some(i) = SPECIAL_CLASSES.iter().position(|s| *s == c) {
            v[1 + TAGS.len() + i] += 1.0 / n as f64;
        }
    }
    v
}

pub fn segment_block(tokens: &[&str]) -> Vec<f64> {
    segment_block_tagged(tokens, &tag_pos(tokens))
}

/// Mean of token vectors; unknown tokens count as zero vectors.
pub fn segment_embedding(tokens: &[&str], emb: &Embeddings) -> Vec<f64> {
    let mut v = vec![0.0; emb.dim];
    if tokens.is_empty() {
        return v;
    }
    for tok in tokens {
        if let Some(e) = emb.get(tok) {
            for (a, b) in v.iter_mut().zip(e) {
                *a += b;
            }
        }
    }
    for a in &mut v {
        *a /= tokens.len() as f64;
    }
    v
}

pub fn featurize(
    trigger: &str,
    action: &str,
    config: FeatureConfig,
    emb: Option<&Embeddings>,
) -> Result<FeatureVector, ClassifierError> {
    let t = tokenize(trigger);
    let a = tokenize(action);
    let mut values = segment_block(&t);
    values.extend(segment_block(&a));
    let dim = match config {
        FeatureConfig::Baseline => 0,
        FeatureConfig::Full => {
            let emb = emb.ok_or(ClassifierError::MissingEmbeddings)?;
            values.extend(segment_embedding(&t, emb));
            values.extend(segment_embedding(&a, emb));
            emb.dim
        }
    };
    Ok(FeatureVector {
        values,
        schema: schema(config, dim),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn emb(text: &str) -> Embeddings {
        Embeddings::parse("e", text).unwrap()
    }

    #[test]
    fn lengths() {
        let f = featurize("", "", FeatureConfig::Baseline, None).unwrap();
        assert_eq!(f.values, vec![0.0; 36]);
        assert_eq!(f.schema.len(), 36);
        let mut text = String::from("x");
        text.push_str(&" 1".repeat(100));
        let f = featurize("x", "y", FeatureConfig::Full, Some(&emb(&text))).unwrap();
        assert_eq!(f.values.len(), 236);
        assert_eq!(f.schema[236 - 1], "action.emb.99");
        assert!(matches!(
            featurize("x", "y", FeatureConfig::Full, None),
            Err(ClassifierError::MissingEmbeddings)
        ));
    }

    #[test]
    fn oov_tokens_average_as_zero() {
        let e = emb("java 2 4 -6\n");
        let f = featurize("Java 9", "", FeatureConfig::Full, Some(&e)).unwrap();
        assert_eq!(&f.values[36..39], &[1.0, 2.0, -3.0]);
        assert_eq!(&f.values[39..42], &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn pos_distribution_sums_to_one() {
        let f = featurize("Remove this guard", "lazyStackTrace() works", FeatureConfig::Baseline, None)
            .unwrap();
        let t: f64 = f.values[1..13].iter().sum();
        let a: f64 = f.values[SEGMENT_DIMS + 1..SEGMENT_DIMS + 13].iter().sum();
        assert!((t - 1.0).abs() < 1e-12 && (a - 1.0).abs() < 1e-12);
        assert_eq!(f.values[0], 3.0);
        assert_eq!(f.values[SEGMENT_DIMS], 4.0);
    }
}
