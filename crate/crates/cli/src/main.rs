//! `trigit`: evaluate executable trigger-action comments in a Java source
//! tree, mine TODO comments and classify them.

mod exit;
mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use exit::Condition;
use report::Style;
use trigit_core::classifier::{load_dataset, loo_cross_validate, CvResult};
use trigit_core::eval::write_tree;
use trigit_core::miner::filter_by_cue_words;
use trigit_core::{
    build_project_model, evaluate_all, extract_todos, token_complexity, Embeddings, EvalOptions,
    FeatureConfig, Hyper, LoadError, Mode, Project, SourceError, Status, UnitKind,
};

#[derive(Parser)]
#[command(name = "trigit", version, about = "Executable trigger-action comments for Java")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every TrigIt method and act on the satisfied ones.
    Run(RunArgs),
    /// Check encodings and describe what would be done, without writing.
    Check(RunArgs),
    /// Extract TODO comments as JSON Lines.
    Mine(MineArgs),
    /// Leave-one-out evaluation of the trigger-action classifier.
    Classify(ClassifyArgs),
    /// Token counts of each unit's trigger, action and structure.
    Tokens(TokensArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Notify,
    Fold,
    Patch,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct RunArgs {
    /// Root of the Java source tree.
    source_root: PathBuf,
    #[arg(long, value_enum, default_value = "notify")]
    mode: ModeArg,
    /// Log each phase to stderr and write the stripped classes.
    #[arg(long)]
    debug: bool,
    /// Treat every trigger as satisfied.
    #[arg(long)]
    assume_true: bool,
    /// Evaluate and check, but take no action.
    #[arg(long)]
    no_action: bool,
    /// Directory for transformed sources (fold mode) and debug output.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Where to write the unified diff (patch mode).
    #[arg(long)]
    patch_out: Option<PathBuf>,
    /// Skip unparseable files instead of failing.
    #[arg(long)]
    lenient: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct MineArgs {
    source_root: PathBuf,
    /// Keep comments without cue words.
    #[arg(long)]
    all: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConfigArg {
    Baseline,
    Full,
    Both,
}

#[derive(Args)]
struct ClassifyArgs {
    /// JSON Lines of {"trigger","action","label":"yes"|"no"}.
    #[arg(long)]
    dataset: PathBuf,
    /// Defaults to both systems when embeddings are given, else baseline.
    #[arg(long, value_enum)]
    config: Option<ConfigArg>,
    /// Word vectors, one `word v1 .. vD` per line.
    #[arg(long)]
    embeddings: Option<PathBuf>,
    #[arg(long, default_value_t = Hyper::default().learning_rate)]
    learning_rate: f64,
    #[arg(long, default_value_t = Hyper::default().epochs)]
    epochs: usize,
    #[arg(long, default_value_t = Hyper::default().l2)]
    l2: f64,
    #[arg(long, default_value_t = Hyper::default().threshold)]
    threshold: f64,
    /// Also write the metrics as JSON to this file.
    #[arg(long)]
    metrics_out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct TokensArgs {
    source_root: PathBuf,
    #[arg(long)]
    lenient: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let result = match cli.command {
        Command::Run(a) => cmd_run(&a, &mut out),
        Command::Check(a) => cmd_check(&a, &mut out),
        Command::Mine(a) => cmd_mine(&a, &mut out),
        Command::Classify(a) => cmd_classify(&a, &mut out),
        Command::Tokens(a) => cmd_tokens(&a, &mut out),
    };
    let _ = out.flush();
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("trigit: {e:#}");
            ExitCode::from(Condition::Usage.code())
        }
    }
}

fn debug_log(on: bool, msg: impl FnOnce() -> String) {
    if on {
        eprintln!("[debug] {}", msg());
    }
}

/// A project plus the per-file errors that strict loading rejected.
struct Loaded {
    project: Project,
    strict_errors: Vec<SourceError>,
    model_ms: f64,
}

/// Strict loading that falls back to lenient so the parseable part can
/// still be reported.
fn load(root: &Path, lenient: bool) -> Result<Loaded> {
    if !root.is_dir() {
        bail!("source root {} is not a directory", root.display());
    }
    let t = Instant::now();
    let (project, strict_errors) = match build_project_model(root, lenient) {
        Ok(p) => (p, Vec::new()),
        Err(LoadError::Invalid(errs)) => (build_project_model(root, true)?, errs),
        Err(e) => return Err(e.into()),
    };
    Ok(Loaded {
        project,
        strict_errors,
        model_ms: t.elapsed().as_secs_f64() * 1000.0,
    })
}

fn cmd_run(a: &RunArgs, out: &mut impl Write) -> Result<u8> {
    match a.mode {
        ModeArg::Fold if a.out_dir.is_none() => bail!("--mode fold requires --out-dir"),
        ModeArg::Patch if a.patch_out.is_none() => bail!("--mode patch requires --patch-out"),
        _ => {}
    }
    let loaded = load(&a.source_root, a.lenient)?;
    let p = &loaded.project;
    debug_log(a.debug, || {
        format!(
            "model: {} java files, {} build files, {} classes ({:.1} ms)",
            p.files.len(),
            p.raw_files.len(),
            p.model.classes.len(),
            loaded.model_ms
        )
    });
    for e in &loaded.strict_errors {
        eprintln!("trigit: {e}");
    }
    let strict_failed = !loaded.strict_errors.is_empty();
    let mode = match a.mode {
        _ if a.no_action || strict_failed => Mode::Notify,
        ModeArg::Notify => Mode::Notify,
        ModeArg::Fold => Mode::Fold,
        ModeArg::Patch => Mode::Patch,
    };
    let opts = EvalOptions {
        mode,
        assume_true: a.assume_true,
        no_action: a.no_action,
        debug: a.debug,
        lenient: a.lenient,
    };
    let mut run = evaluate_all(p, &opts);
    run.report.timings_ms.model = loaded.model_ms;
    let report = &run.report;
    debug_log(a.debug, || {
        format!(
            "units: {} found, {} compiled, {} encoding errors",
            run.frontend.units.len(),
            run.frontend.compiled().count(),
            report.errors.len()
        )
    });
    for t in &report.triggers {
        debug_log(a.debug, || format!("evaluate {}: {:?}", t.unit, t.status));
    }
    debug_log(a.debug, || {
        format!("edits: {} planned ({:.1} ms)", report.edits.len(), report.timings_ms.action)
    });

    if let (Mode::Fold, Some(dir)) = (mode, &a.out_dir) {
        write_tree(dir, &run.transformed).with_context(|| format!("writing {}", dir.display()))?;
        debug_log(a.debug, || format!("wrote {} files to {}", run.transformed.len(), dir.display()));
    }
    if let (Mode::Patch, Some(path), Some(patch)) = (mode, &a.patch_out, &run.patch) {
        std::fs::write(path, &patch.text).with_context(|| format!("writing {}", path.display()))?;
        debug_log(a.debug, || format!("wrote patch to {}", path.display()));
    }
    if a.debug {
        let dir = a.out_dir.clone().unwrap_or_else(|| PathBuf::from("."));
        write_tree(&dir, &run.debug_files).with_context(|| format!("writing {}", dir.display()))?;
        debug_log(true, || format!("wrote {} stripped classes under {}", run.debug_files.len(), dir.display()));
    }

    match a.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(report)?)?,
        Format::Text => write!(out, "{}", report::run_text(report, &Style::detect()))?,
    }
    let mut conds = Vec::new();
    if report.satisfied_count() > 0 {
        conds.push(Condition::Satisfied);
    }
    if !report.errors.is_empty() {
        conds.push(Condition::Encoding);
    }
    if strict_failed {
        conds.push(Condition::Strict);
    }
    Ok(exit::code_for(&conds))
}

#[derive(Serialize)]
struct PlanLine {
    unit: String,
    line: String,
}

#[derive(Serialize)]
struct CheckReport<'a> {
    errors: &'a [trigit_core::eval::ReportError],
    plan: Vec<PlanLine>,
    diagnostics: &'a [String],
}

fn cmd_check(a: &RunArgs, out: &mut impl Write) -> Result<u8> {
    let loaded = load(&a.source_root, a.lenient)?;
    for e in &loaded.strict_errors {
        eprintln!("trigit: {e}");
    }
    let opts = EvalOptions {
        mode: Mode::Notify,
        assume_true: a.assume_true,
        no_action: true,
        debug: false,
        lenient: a.lenient,
    };
    let run = evaluate_all(&loaded.project, &opts);
    let report = &run.report;
    let mut plan = Vec::new();
    for (entry, t) in run.frontend.units.iter().zip(&report.triggers) {
        let Some(unit) = &entry.unit else { continue };
        let mut steps: Vec<String> = match unit.kind {
            UnitKind::Action => unit.actions.iter().map(|s| s.describe()).collect(),
            UnitKind::Trigger => unit
                .guard_sites
                .iter()
                .map(|g| format!("fold guard at {}:{}", g.file, g.span.start_line))
                .collect(),
        };
        steps.push(format!("remove method {}", unit.method));
        for step in steps {
            let line = match t.status {
                _ if a.assume_true => format!("would execute: {step} (forced by assume-true)"),
                Status::Satisfied => format!("would execute: {step} (trigger currently true)"),
                Status::Unsatisfied => format!("would {step} (trigger currently false)"),
                Status::Unevaluable => format!("would skip: {step} (trigger unevaluable)"),
            };
            plan.push(PlanLine {
                unit: entry.name.clone(),
                line,
            });
        }
    }
    match a.format {
        Format::Json => {
            let r = CheckReport {
                errors: &report.errors,
                plan,
                diagnostics: &report.diagnostics,
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&r)?)?;
        }
        Format::Text => {
            for e in &report.errors {
                writeln!(out, "{} {} ({}:{}): {}", e.category, e.unit, e.file, e.line, e.message)?;
            }
            for p in &plan {
                writeln!(out, "{}: {}", p.unit, p.line)?;
            }
            for d in &report.diagnostics {
                writeln!(out, "note: {d}")?;
            }
            writeln!(out, "{} units, {} encoding errors", report.triggers.len(), report.errors.len())?;
        }
    }
    let mut conds = Vec::new();
    if report.satisfied_count() > 0 {
        conds.push(Condition::Satisfied);
    }
    if !report.errors.is_empty() {
        conds.push(Condition::Encoding);
    }
    if !loaded.strict_errors.is_empty() {
        conds.push(Condition::Strict);
    }
    Ok(exit::code_for(&conds))
}

fn cmd_mine(a: &MineArgs, out: &mut impl Write) -> Result<u8> {
    if !a.source_root.is_dir() {
        bail!("source root {} is not a directory", a.source_root.display());
    }
    let all = extract_todos(&a.source_root)?;
    let todo = all.len();
    let kept = if a.all { all } else { filter_by_cue_words(all) };
    let tac = kept.iter().filter(|r| !r.cue_words_found.is_empty()).count();
    for r in &kept {
        writeln!(out, "{}", serde_json::to_string(&r.to_json())?)?;
    }
    eprintln!("#TODO {todo} #TAC {tac}");
    Ok(exit::OK)
}

fn cmd_classify(a: &ClassifyArgs, out: &mut impl Write) -> Result<u8> {
    let data = load_dataset(&a.dataset)?;
    let emb = a.embeddings.as_deref().map(Embeddings::load).transpose()?;
    if let Some(e) = &emb {
        for w in &e.warnings {
            eprintln!("trigit: {w}");
        }
    }
    let config = a.config.unwrap_or(if emb.is_some() { ConfigArg::Both } else { ConfigArg::Baseline });
    let systems = match config {
        ConfigArg::Baseline => vec![FeatureConfig::Baseline],
        ConfigArg::Full => vec![FeatureConfig::Full],
        ConfigArg::Both => vec![FeatureConfig::Baseline, FeatureConfig::Full],
    };
    if systems.contains(&FeatureConfig::Full) && emb.is_none() {
        bail!("the full system needs --embeddings");
    }
    let hyper = Hyper {
        learning_rate: a.learning_rate,
        epochs: a.epochs,
        l2: a.l2,
        threshold: a.threshold,
    };
    let yes_no = |b: bool| if b { "yes" } else { "no" };
    let mut results: Vec<CvResult> = Vec::new();
    for sys in systems {
        let emb = if sys == FeatureConfig::Full { emb.as_ref() } else { None };
        let r = loo_cross_validate(&data, sys, emb, hyper)?;
        for p in &r.predictions {
            eprintln!(
                "fold {}/{} [{}]: predicted {} (p={:.3}) actual {}{}",
                p.held_out + 1,
                r.folds,
                r.system,
                yes_no(p.predicted),
                p.probability,
                yes_no(p.actual),
                if p.degenerate { " degenerate" } else { "" }
            );
        }
        results.push(r);
    }
    if let Some(path) = &a.metrics_out {
        std::fs::write(path, serde_json::to_string_pretty(&results)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    match a.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&results)?)?,
        Format::Text => write!(out, "{}", report::classify_text(&results, data.len()))?,
    }
    Ok(exit::OK)
}

fn cmd_tokens(a: &TokensArgs, out: &mut impl Write) -> Result<u8> {
    let loaded = load(&a.source_root, a.lenient)?;
    for e in &loaded.strict_errors {
        eprintln!("trigit: {e}");
    }
    let rows = token_complexity(&loaded.project.files);
    match a.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&rows)?)?,
        Format::Text => write!(out, "{}", report::tokens_text(&rows))?,
    }
    Ok(if loaded.strict_errors.is_empty() { exit::OK } else { exit::STRICT })
}
