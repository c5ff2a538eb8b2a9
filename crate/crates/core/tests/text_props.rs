use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regex::Regex;

use trigit_core::classifier::features::SEGMENT_DIMS;
use trigit_core::classifier::logreg::{loss_and_gradient, train};
use trigit_core::classifier::{featurize, loo_cross_validate, Confusion, Metrics};
use trigit_core::miner::{
    cue_words, filter_by_cue_words, normalize, records_for_file, split_trigger_action, TEMPLATES,
};
use trigit_core::testgen::separable_dataset;
use trigit_core::{Embeddings, Example, FeatureConfig, Hyper};

fn comment_text() -> impl Strategy<Value = String> {
    let piece = prop::sample::select(vec![
        "TODO", "TODO:", "TODO(me):", "(x)", "-", ":", "//", "/*", "*/", "*", " ", "\n", "if",
        "when", "once", "as soon as", "then", ",", "fix", "X_IF", "Once", "remove this", "asap",
    ]);
    prop::collection::vec(piece, 0..12).prop_map(|v| v.join(" "))
}

fn oracle_cues(text: &str) -> Vec<String> {
    let re = Regex::new(r"(?i)\b(if|when|once|as|then)\b").unwrap();
    re.find_iter(text).map(|m| m.as_str().to_lowercase()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn normalize_is_idempotent(raw in comment_text()) {
        let once = normalize(&raw);
        prop_assert_eq!(normalize(&once), once.clone());
        prop_assert!(!once.starts_with("TODO"));
    }

    #[test]
    fn cue_words_match_regex_scan(text in comment_text()) {
        prop_assert_eq!(cue_words(&text), oracle_cues(&text));
    }

    #[test]
    fn split_reconstructs_text(text in comment_text()) {
        let text = normalize(&text);
        if let Some(s) = split_trigger_action(&text) {
            prop_assert!(!s.trigger.is_empty() && !s.action.is_empty());
            prop_assert!(text.contains(&s.trigger) && text.contains(&s.action));
            let squash = |x: &str| x.split_whitespace().collect::<String>().to_lowercase();
            let rebuilt = TEMPLATES[s.template - 1].render(&s.trigger, &s.action);
            prop_assert_eq!(squash(&rebuilt), squash(&text));
        }
    }

    #[test]
    fn tac_never_exceeds_todo(lines in prop::collection::vec(comment_text(), 0..10)) {
        let src: String = lines.iter().map(|l| format!("// {}\nint x;\n", l.replace('\n', " "))).collect();
        let all = records_for_file("A.java", &format!("class A {{\n{src}}}\n"));
        let brute = lines.iter().filter(|l| l.contains("TODO")).count();
        prop_assert_eq!(all.len(), brute);
        let kept = filter_by_cue_words(all.clone());
        prop_assert!(kept.len() <= all.len());
        let scan = all.iter().filter(|r| !oracle_cues(&r.normalized_text).is_empty()).count();
        prop_assert_eq!(kept.len(), scan);
    }

    #[test]
    fn feature_groups_are_distributions(t in "[a-zA-Z0-9 .,()_]{0,40}", a in "[a-zA-Z0-9 .,()_]{0,40}") {
        let f = featurize(&t, &a, FeatureConfig::Baseline, None).unwrap();
        for base in [0, SEGMENT_DIMS] {
            let pos: f64 = f.values[base + 1..base + 13].iter().sum();
            if f.values[base] > 0.0 {
                prop_assert!((pos - 1.0).abs() < 1e-9);
            } else {
                prop_assert_eq!(pos, 0.0);
            }
            prop_assert!(f.values[base + 13..base + SEGMENT_DIMS].iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }

    #[test]
    fn metric_identities(tp in 0usize..50, fp in 0usize..50, fn_ in 0usize..50, tn in 0usize..50) {
        prop_assume!(tp + fp + fn_ + tn > 0);
        let m = Metrics::from_confusion(Confusion { tp, fp, fn_, tn });
        let p = if tp + fp == 0 { 0.0 } else { tp as f64 / (tp + fp) as f64 };
        let r = if tp + fn_ == 0 { 0.0 } else { tp as f64 / (tp + fn_) as f64 };
        let f1 = if p + r > 0.0 { 2.0 * p * r / (p + r) } else { 0.0 };
        prop_assert_eq!(m.precision, p);
        prop_assert_eq!(m.recall, r);
        prop_assert_eq!(m.f1, f1);
        prop_assert_eq!(m.accuracy, (tp + tn) as f64 / (tp + fp + fn_ + tn) as f64);
        for v in [m.accuracy, m.precision, m.recall, m.f1] {
            prop_assert!((0.0..=1.0).contains(&v));
        }
    }
}

fn random_problem(rng: &mut ChaCha8Rng) -> (Vec<Vec<f64>>, Vec<bool>, Vec<f64>, f64) {
    let n = rng.gen_range(3..12);
    let d = rng.gen_range(1..6);
    let xs: Vec<Vec<f64>> = (0..n).map(|_| (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect()).collect();
    let ys: Vec<bool> = (0..n).map(|i| i == 0 || (i > 1 && rng.gen_bool(0.5))).collect();
    let w: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
    (xs, ys, w, rng.gen_range(-1.0..1.0))
}

#[test]
fn gradient_matches_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for case in 0..20 {
        let (xs, ys, w, b) = random_problem(&mut rng);
        let l2 = 1e-2;
        let (_, gw, gb) = loss_and_gradient(&w, b, &xs, &ys, l2);
        let h = 1e-5;
        let mut num = Vec::new();
        for j in 0..w.len() {
            let (mut wp, mut wm) = (w.clone(), w.clone());
            wp[j] += h;
            wm[j] -= h;
            let lp = loss_and_gradient(&wp, b, &xs, &ys, l2).0;
            let lm = loss_and_gradient(&wm, b, &xs, &ys, l2).0;
            num.push((lp - lm) / (2.0 * h));
        }
        num.push(
            (loss_and_gradient(&w, b + h, &xs, &ys, l2).0 - loss_and_gradient(&w, b - h, &xs, &ys, l2).0)
                / (2.0 * h),
        );
        let mut ana = gw.clone();
        ana.push(gb);
        let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let diff: Vec<f64> = ana.iter().zip(&num).map(|(a, n)| a - n).collect();
        let rel = norm(&diff) / norm(&ana).max(norm(&num));
        assert!(rel < 1e-5, "case {case}: relative error {rel}");
    }
}

#[test]
fn training_loss_never_increases_and_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..20 {
        let (xs, ys, _, _) = random_problem(&mut rng);
        let hyper = Hyper {
            learning_rate: 5.0,
            epochs: 100,
            ..Hyper::default()
        };
        let (m1, trace) = train(&xs, &ys, hyper).unwrap();
        assert!(trace.windows(2).all(|w| w[1] <= w[0]));
        let (m2, _) = train(&xs, &ys, hyper).unwrap();
        assert_eq!(
            m1.weights.iter().map(|w| w.to_bits()).collect::<Vec<_>>(),
            m2.weights.iter().map(|w| w.to_bits()).collect::<Vec<_>>()
        );
        assert_eq!(m1.bias.to_bits(), m2.bias.to_bits());
    }
}

#[test]
fn loocv_runs_n_folds() {
    let (data, _) = separable_dataset(10, 1);
    let r = loo_cross_validate(&data, FeatureConfig::Baseline, None, Hyper::default()).unwrap();
    assert_eq!(r.folds, 10);
}

/// Some single dimension splits the classes with a threshold.
fn single_feature_separates(xs: &[Vec<f64>], ys: &[bool]) -> bool {
    (0..xs[0].len()).any(|j| {
        let pos = xs.iter().zip(ys).filter(|p| *p.1).map(|p| p.0[j]);
        let neg = xs.iter().zip(ys).filter(|p| !*p.1).map(|p| p.0[j]);
        let (pmin, pmax) = pos.fold((f64::MAX, f64::MIN), |a, v| (a.0.min(v), a.1.max(v)));
        let (nmin, nmax) = neg.fold((f64::MAX, f64::MIN), |a, v| (a.0.min(v), a.1.max(v)));
        pmin > nmax || nmin > pmax
    })
}

#[test]
fn separable_dataset_full_beats_control_and_baseline() {
    let (data, emb_text) = separable_dataset(40, 5);
    let emb = Embeddings::parse("emb", &emb_text).unwrap();
    let xs: Vec<Vec<f64>> = data
        .iter()
        .map(|e| featurize(&e.trigger, &e.action, FeatureConfig::Full, Some(&emb)).unwrap().values)
        .collect();
    let ys: Vec<bool> = data.iter().map(|e| e.label).collect();
    assert!(single_feature_separates(&xs, &ys));

    let full = loo_cross_validate(&data, FeatureConfig::Full, Some(&emb), Hyper::default()).unwrap();
    let base = loo_cross_validate(&data, FeatureConfig::Baseline, None, Hyper::default()).unwrap();
    let mut labels = ys.clone();
    labels.shuffle(&mut ChaCha8Rng::seed_from_u64(77));
    let shuffled: Vec<Example> = data
        .iter()
        .zip(labels)
        .map(|(e, label)| Example { label, ..e.clone() })
        .collect();
    let control = loo_cross_validate(&shuffled, FeatureConfig::Full, Some(&emb), Hyper::default()).unwrap();
    assert!(full.metrics.accuracy >= 0.9, "{:?}", full.metrics);
    assert!(full.metrics.accuracy - control.metrics.accuracy >= 0.3, "{:?}", control.metrics);
    assert!(full.metrics.accuracy > base.metrics.accuracy);
    assert_eq!(full.folds, 40);
}

#[test]
fn baseline_and_full_differ_by_two_embedding_groups() {
    let (_, emb_text) = separable_dataset(4, 1);
    let emb = Embeddings::parse("emb", &emb_text).unwrap();
    let words = ["if", "Java", "9", "FieldMapper"];
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..20 {
        let t: Vec<&str> = (0..rng.gen_range(0..5)).map(|_| *words.choose(&mut rng).unwrap()).collect();
        let b = featurize(&t.join(" "), "x", FeatureConfig::Baseline, None).unwrap();
        let f = featurize(&t.join(" "), "x", FeatureConfig::Full, Some(&emb)).unwrap();
        assert_eq!(f.values.len() - b.values.len(), 2 * emb.dim);
        assert_eq!(&f.values[..b.values.len()], &b.values[..]);
        assert_eq!(&f.schema[..b.schema.len()], &b.schema[..]);
    }
}
