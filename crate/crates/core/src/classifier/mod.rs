//! Trigger-action comment classification: features, logistic regression
//! and leave-one-out evaluation.

pub mod embeddings;
pub mod features;
pub mod logreg;
pub mod text;

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::ClassifierError;
pub use embeddings::Embeddings;
pub use features::{featurize, FeatureConfig, FeatureVector};
pub use logreg::{train, Hyper, Model};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
}

impl Confusion {
    pub fn add(&mut self, predicted: bool, actual: bool) {
        match (predicted, actual) {
            (true, true) => self.tp += 1,
            (true, false) => self.fp += 1,
            (false, true) => self.fn_ += 1,
            (false, false) => self.tn += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Metrics {
    pub accuracy: f64,
    pub f1: f64,
    pub precision: f64,
    pub recall: f64,
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub tn: usize,
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

impl Metrics {
    pub fn from_confusion(c: Confusion) -> Metrics {
        let precision = ratio(c.tp, c.tp + c.fp);
        let recall = ratio(c.tp, c.tp + c.fn_);
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        Metrics {
            accuracy: ratio(c.tp + c.tn, c.total()),
            f1,
            precision,
            recall,
            tp: c.tp,
            fp: c.fp,
            fn_: c.fn_,
            tn: c.tn,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Example {
    pub trigger: String,
    pub action: String,
    pub label: bool,
}

#[derive(Deserialize)]
struct ExampleJson {
    trigger: String,
    action: String,
    label: String,
}

/// Reads `{"trigger","action","label":"yes"|"no"}` lines.
pub fn parse_dataset(path: &str, text: &str) -> Result<Vec<Example>, ClassifierError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let err = |message: String| ClassifierError::Format {
            path: path.to_string(),
            line: i + 1,
            message,
        };
        let e: ExampleJson = serde_json::from_str(line).map_err(|e| err(e.to_string()))?;
        let label = match e.label.as_str() {
            "yes" => true,
            "no" => false,
            other => return Err(err(format!("label must be \"yes\" or \"no\", found {other:?}"))),
        };
        out.push(Example {
            trigger: e.trigger,
            action: e.action,
            label,
        });
    }
    Ok(out)
}

pub fn load_dataset(path: &Path) -> Result<Vec<Example>, ClassifierError> {
    let text = std::fs::read_to_string(path).map_err(|source| ClassifierError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_dataset(&path.display().to_string(), &text)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FoldPrediction {
    pub held_out: usize,
    pub probability: f64,
    pub predicted: bool,
    pub actual: bool,
    /// The training split had a single label; the prior was predicted.
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CvResult {
    pub system: String,
    pub metrics: Metrics,
    pub folds: usize,
    pub degenerate_folds: usize,
    /// Share of positive examples in the dataset.
    pub positive_rate: f64,
    #[serde(skip)]
    pub predictions: Vec<FoldPrediction>,
}

/// Leave-one-out cross validation. Each fold standardizes and trains on the
/// other N-1 examples only; a fold without both labels predicts its
/// training prior.
pub fn loo_cross_validate(
    data: &[Example],
    config: FeatureConfig,
    emb: Option<&Embeddings>,
    hyper: Hyper,
) -> Result<CvResult, ClassifierError> {
    let pos = data.iter().filter(|e| e.label).count();
    if data.len() < 3 || pos == 0 || pos == data.len() {
        return Err(ClassifierError::DegenerateDataset);
    }
    let xs = data
        .iter()
        .map(|e| featurize(&e.trigger, &e.action, config, emb).map(|f| f.values))
        .collect::<Result<Vec<_>, _>>()?;
    let ys: Vec<bool> = data.iter().map(|e| e.label).collect();
    let predictions: Vec<FoldPrediction> = (0..data.len())
        .into_par_iter()
        .map(|held| {
            let (tx, ty): (Vec<Vec<f64>>, Vec<bool>) = (0..data.len())
                .filter(|&i| i != held)
                .map(|i| (xs[i].clone(), ys[i]))
                .unzip();
            let (probability, degenerate) = match train(&tx, &ty, hyper) {
                Ok((m, _)) => (m.predict_proba(&xs[held]), false),
                Err(_) => (ty.iter().filter(|y| **y).count() as f64 / ty.len() as f64, true),
            };
            FoldPrediction {
                held_out: held,
                probability,
                predicted: probability >= hyper.threshold,
                actual: ys[held],
                degenerate,
            }
        })
        .collect();
    let mut c = Confusion::default();
    for p in &predictions {
        c.add(p.predicted, p.actual);
    }
    Ok(CvResult {
        system: config.name().to_string(),
        metrics: Metrics::from_confusion(c),
        folds: predictions.len(),
        degenerate_folds: predictions.iter().filter(|p| p.degenerate).count(),
        positive_rate: pos as f64 / data.len() as f64,
        predictions,
    })
}
