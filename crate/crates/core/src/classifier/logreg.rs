//! L2-regularized logistic regression trained by full-batch gradient
//! descent on standardized features.

use serde::Serialize;

use crate::error::ClassifierError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hyper {
    pub learning_rate: f64,
    pub epochs: usize,
    pub l2: f64,
    pub threshold: f64,
}

impl Default for Hyper {
    fn default() -> Self {
        Hyper {
            learning_rate: 0.1,
            epochs: 500,
            l2: 1e-4,
            threshold: 0.5,
        }
    }
}

/// Per-dimension training mean and standard deviation; dimensions with zero
/// spread map to 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

impl Standardizer {
    pub fn fit(xs: &[Vec<f64>]) -> Standardizer {
        let d = xs.first().map_or(0, Vec::len);
        let n = xs.len().max(1) as f64;
        let mut mean = vec![0.0; d];
        for x in xs {
            for (m, v) in mean.iter_mut().zip(x) {
                *m += v / n;
            }
        }
        let mut std = vec![0.0; d];
        for x in xs {
            for ((s, v), m) in std.iter_mut().zip(x).zip(&mean) {
                *s += (v - m) * (v - m) / n;
            }
        }
        for s in &mut std {
            *s = s.sqrt();
            if *s < 1e-12 {
                *s = 0.0;
            }
        }
        Standardizer { mean, std }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.mean)
            .zip(&self.std)
            .map(|((v, m), s)| if *s == 0.0 { 0.0 } else { (v - m) / s })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Model {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub standardizer: Standardizer,
    pub hyper: Hyper,
}

impl Model {
    pub fn predict_proba(&self, x: &[f64]) -> f64 {
        let z = self.standardizer.apply(x);
        sigmoid(dot(&self.weights, &z) + self.bias)
    }

    pub fn predict(&self, x: &[f64]) -> bool {
        self.predict_proba(x) >= self.hyper.threshold
    }
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Mean negative log-likelihood plus `l2 / 2 * |w|^2`, with its gradient
/// with respect to the weights and the bias. The bias is not regularized.
pub fn loss_and_gradient(
    w: &[f64],
    b: f64,
    xs: &[Vec<f64>],
    ys: &[bool],
    l2: f64,
) -> (f64, Vec<f64>, f64) {
    let n = xs.len() as f64;
    let mut loss = 0.0;
    let mut gw = vec![0.0; w.len()];
    let mut gb = 0.0;
    for (x, &y) in xs.iter().zip(ys) {
        let z = dot(w, x) + b;
        let y = if y { 1.0 } else { 0.0 };
        loss += (softplus(z) - y * z) / n;
        let r = (sigmoid(z) - y) / n;
        for (g, v) in gw.iter_mut().zip(x) {
            *g += r * v;
        }
        gb += r;
    }
    loss += 0.5 * l2 * dot(w, w);
    for (g, wi) in gw.iter_mut().zip(w) {
        *g += l2 * wi;
    }
    (loss, gw, gb)
}

/// Trained model and the loss after each epoch.
pub fn train(
    xs: &[Vec<f64>],
    ys: &[bool],
    hyper: Hyper,
) -> Result<(Model, Vec<f64>), ClassifierError> {
    let pos = ys.iter().filter(|y| **y).count();
    if xs.len() < 2 || pos == 0 || pos == ys.len() {
        return Err(ClassifierError::DegenerateDataset);
    }
    let standardizer = Standardizer::fit(xs);
    let zs: Vec<Vec<f64>> = xs.iter().map(|x| standardizer.apply(x)).collect();
    let prior = pos as f64 / ys.len() as f64;
    let mut w = vec![0.0; standardizer.mean.len()];
    let mut b = (prior / (1.0 - prior)).ln();
    let (mut loss, mut gw, mut gb) = loss_and_gradient(&w, b, &zs, ys, hyper.l2);
    let mut trace = Vec::with_capacity(hyper.epochs);
    for _ in 0..hyper.epochs {
        let mut step = hyper.learning_rate;
        for _ in 0..40 {
            let w2: Vec<f64> = w.iter().zip(&gw).map(|(a, g)| a - step * g).collect();
            let b2 = b - step * gb;
            let (l2, g2w, g2b) = loss_and_gradient(&w2, b2, &zs, ys, hyper.l2);
            if l2 <= loss {
                (w, b, loss, gw, gb) = (w2, b2, l2, g2w, g2b);
                break;
            }
            step /= 2.0;
        }
        trace.push(loss);
    }
    Ok((
        Model {
            weights: w,
            bias: b,
            standardizer,
            hyper,
        },
        trace,
    ))
}
