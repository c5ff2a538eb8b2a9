use criterion::{black_box, criterion_group, criterion_main, Criterion};

use trigit_core::classifier::loo_cross_validate;
use trigit_core::miner::records_for_file;
use trigit_core::testgen::{corpus, separable_dataset};
use trigit_core::{evaluate_all, Embeddings, EvalOptions, FeatureConfig, Hyper, Mode, ParsedFile, Project};

fn parse(c: &mut Criterion) {
    let files = corpus(200, 20, 1);
    c.bench_function("parse 200 files", |b| {
        b.iter(|| {
            for (p, s) in files.iter().filter(|f| f.0.ends_with(".java")) {
                black_box(ParsedFile::parse(s.clone(), p).unwrap());
            }
        })
    });
}

fn evaluate(c: &mut Criterion) {
    let project = Project::from_sources(corpus(200, 20, 1), false).unwrap();
    let mut g = c.benchmark_group("evaluate 20 units over 200 files");
    for mode in [Mode::Notify, Mode::Patch] {
        let opts = EvalOptions {
            mode,
            ..Default::default()
        };
        g.bench_function(format!("{mode:?}"), |b| b.iter(|| black_box(evaluate_all(&project, &opts))));
    }
    g.finish();
}

fn mine(c: &mut Criterion) {
    let files = corpus(200, 20, 1);
    c.bench_function("mine 200 files", |b| {
        b.iter(|| {
            files
                .iter()
                .map(|(p, s)| records_for_file(p, s).len())
                .sum::<usize>()
        })
    });
}

fn classify(c: &mut Criterion) {
    let (data, emb) = separable_dataset(40, 5);
    let emb = Embeddings::parse("emb", &emb).unwrap();
    let hyper = Hyper::default();
    let mut g = c.benchmark_group("loocv 40 examples");
    g.sample_size(10);
    g.bench_function("baseline", |b| {
        b.iter(|| loo_cross_validate(&data, FeatureConfig::Baseline, None, hyper).unwrap())
    });
    g.bench_function("full", |b| {
        b.iter(|| loo_cross_validate(&data, FeatureConfig::Full, Some(&emb), hyper).unwrap())
    });
    g.finish();
}

criterion_group!(benches, parse, evaluate, mine, classify);
criterion_main!(benches);
