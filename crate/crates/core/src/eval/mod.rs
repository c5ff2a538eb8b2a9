//! Evaluation of compiled units and materialization of their actions.
//!
//! All triggers are evaluated before any edit is produced, and edits are
//! applied to copies of the sources in one pass at the end.

pub mod check;
pub mod edits;
pub mod patch;
pub mod query;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::LoadError;
use crate::frontend::{self, Frontend, TrigItUnit, UnitKind};
use crate::model::{build_project_model, Location, Project};
use crate::syntax::printer::class_to_string;
pub use edits::{Edit, EditOrigin};
pub use patch::Patch;
pub use query::{Evaluator, Outcome};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Report only.
    #[default]
    Notify,
    /// Write transformed sources to an output directory.
    Fold,
    /// Emit a unified diff.
    Patch,
}

#[derive(Debug, Clone, Default)]
pub struct EvalOptions {
    pub mode: Mode,
    pub assume_true: bool,
    pub no_action: bool,
    pub debug: bool,
    pub lenient: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Satisfied,
    Unsatisfied,
    Unevaluable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TriggerResult {
    pub unit: String,
    pub satisfied: bool,
    pub explanation: String,
    pub evidence: Option<Location>,
    pub status: Status,
    #[serde(skip)]
    pub kind: Option<UnitKind>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportError {
    pub unit: String,
    pub category: String,
    pub file: String,
    pub line: u32,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EditSummary {
    pub file: String,
    pub origin: EditOrigin,
    pub start_line: u32,
    pub end_line: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Timings {
    pub model: f64,
    pub evaluate: f64,
    pub action: f64,
    pub render: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunReport {
    pub triggers: Vec<TriggerResult>,
    pub errors: Vec<ReportError>,
    pub edits: Vec<EditSummary>,
    pub diagnostics: Vec<String>,
    pub timings_ms: Timings,
}

impl RunReport {
    pub fn satisfied_count(&self) -> usize {
        self.triggers.iter().filter(|t| t.satisfied).count()
    }

    /// 2 with encoding errors, else 1 when a trigger holds, else 0.
    pub fn exit_code(&self) -> i32 {
        if !self.errors.is_empty() {
            2
        } else if self.satisfied_count() > 0 {
            1
        } else {
            0
        }
    }

    /// JSON with timings zeroed, for comparing runs.
    pub fn without_timings(&self) -> RunReport {
        RunReport {
            timings_ms: Timings::default(),
            ..self.clone()
        }
    }
}

/// Everything a run produces.
#[derive(Debug, Clone, Default)]
pub struct RunOutput {
    pub report: RunReport,
    pub edits: Vec<Edit>,
    pub patch: Option<Patch>,
    /// Fold mode: every source and build file, edited where applicable.
    pub transformed: Vec<(String, String)>,
    /// Debug mode: stripped classes keyed by relative output path.
    pub debug_files: Vec<(String, String)>,
    pub frontend: Frontend,
}

fn ms(since: Instant) -> f64 {
    since.elapsed().as_secs_f64() * 1000.0
}

/// Results for every unit plus the names of units whose actions may run.
fn evaluate_units(
    project: &Project,
    fe: &Frontend,
    options: &EvalOptions,
) -> (Vec<TriggerResult>, Vec<ReportError>, BTreeSet<String>, Vec<String>) {
    let mut errors = Vec::new();
    let mut blocked: HashSet<&str> = HashSet::new();
    for entry in &fe.units {
        let mut errs = entry.errors.clone();
        if let Some(u) = &entry.unit {
            errs.extend(check::check_encoding(u, &project.model));
        }
        if !errs.is_empty() {
            blocked.insert(&entry.name);
        }
        errors.extend(errs.into_iter().map(|e| ReportError {
            line: e.span.start_line,
            unit: e.unit,
            category: e.category.to_string(),
            file: e.file,
            message: e.message,
        }));
    }
    let evaluable: HashMap<String, &TrigItUnit> = fe
        .compiled()
        .filter(|u| !blocked.contains(u.name.as_str()))
        .map(|u| (u.name.clone(), u))
        .collect();
    let outcomes: Vec<(Option<Result<Outcome, crate::error::EvalError>>, Vec<String>)> = fe
        .units
        .par_iter()
        .map(|entry| {
            if !evaluable.contains_key(&entry.name) {
                return (None, Vec::new());
            }
            let mut ev = Evaluator::new(&project.model, &evaluable);
            let r = ev.eval_unit(&entry.name);
            (Some(r), ev.warnings)
        })
        .collect();
    let mut results = Vec::new();
    let mut acting = BTreeSet::new();
    let mut warnings = Vec::new();
    for (entry, (outcome, warns)) in fe.units.iter().zip(outcomes) {
        for w in warns {
            let w = format!("{}: {w}", entry.name);
            if !warnings.contains(&w) {
                warnings.push(w);
            }
        }
        let (status, explanation, evidence) = match outcome {
            None => {
                let first = errors
                    .iter()
                    .find(|e| e.unit == entry.name)
                    .map_or("encoding error".to_string(), |e| format!("{} {}", e.category, e.message));
                (Status::Unevaluable, format!("unevaluable: {first}"), None)
            }
            Some(Err(e)) => (Status::Unevaluable, format!("unevaluable: {e}"), None),
            Some(Ok(o)) => {
                let s = if o.value {
                    Status::Satisfied
                } else {
                    Status::Unsatisfied
                };
                (s, o.explanation(), o.evidence)
            }
        };
        let (status, explanation, evidence) = if options.assume_true {
            (Status::Satisfied, "forced by assume-true".to_string(), None)
        } else {
            (status, explanation, evidence)
        };
        if status == Status::Satisfied && evaluable.contains_key(&entry.name) {
            acting.insert(entry.name.clone());
        }
        results.push(TriggerResult {
            unit: entry.name.clone(),
            satisfied: status == Status::Satisfied,
            explanation,
            evidence,
            status,
            kind: entry.kind,
        });
    }
    (results, errors, acting, warnings)
}

/// Edits, prints and diagnostics for the satisfied units.
fn plan_edits(project: &Project, fe: &Frontend, acting: &BTreeSet<String>) -> (Vec<Edit>, Vec<String>) {
    let units: Vec<&TrigItUnit> = fe.compiled().filter(|u| acting.contains(&u.name)).collect();
    let actions: Vec<&TrigItUnit> = units.iter().copied().filter(|u| u.kind == UnitKind::Action).collect();
    let mut diagnostics = Vec::new();
    let out = edits::execute_actions(project, &actions);
    let mut all = out.edits;
    diagnostics.extend(out.diagnostics);
    diagnostics.extend(out.prints.into_iter().map(|(u, m)| format!("print from {u}: {m}")));
    let action_names: Vec<&str> = fe
        .compiled()
        .filter(|u| u.kind == UnitKind::Action)
        .map(|u| u.name.as_str())
        .collect();
    for u in &units {
        match u.kind {
            UnitKind::Trigger => all.extend(edits::fold_guards(project, &u.guard_sites, true, &u.name)),
            UnitKind::Action => {
                let (e, d) = edits::fold_call_sites(project, u, &action_names);
                all.extend(e);
                diagnostics.extend(d);
            }
        }
        all.push(edits::remove_declaration(project, &u.decl, EditOrigin::MethodRemoval, &u.name));
    }
    let (kept, dropped) = edits::resolve_conflicts(all);
    diagnostics.extend(dropped);
    (kept, diagnostics)
}

/// Runs checks, evaluation and the mode-dependent outputs over a loaded
/// project.
pub fn evaluate_all(project: &Project, options: &EvalOptions) -> RunOutput {
    let t_eval = Instant::now();
    let fe = frontend::compile_project(&project.files);
    let mut diagnostics: Vec<String> = project
        .errors
        .iter()
        .map(|e| format!("skipped: {e}"))
        .collect();
    diagnostics.extend(project.model.warnings.iter().cloned());
    diagnostics.extend(fe.diagnostics.iter().cloned());
    let (triggers, errors, acting, warnings) = evaluate_units(project, &fe, options);
    diagnostics.extend(warnings);
    let evaluate = ms(t_eval);

    let t_action = Instant::now();
    let edits = if options.no_action {
        Vec::new()
    } else {
        let (e, d) = plan_edits(project, &fe, &acting);
        diagnostics.extend(d);
        e
    };
    let action = ms(t_action);

    let t_render = Instant::now();
    let mut out = RunOutput::default();
    match options.mode {
        Mode::Notify => {}
        Mode::Patch => {
            let files: Vec<(&str, &str)> = project
                .files
                .iter()
                .map(|f| (f.path.as_str(), f.source.as_str()))
                .collect();
            match patch::render_patch(&files, &edits) {
                Ok(p) => out.patch = Some(p),
                Err(e) => diagnostics.push(format!("patch not rendered: {e}")),
            }
        }
        Mode::Fold => {
            for f in &project.files {
                let mine: Vec<&Edit> = edits.iter().filter(|e| e.file == f.path).collect();
                match patch::apply_edits(&f.path, &f.source, &mine) {
                    Ok(text) => out.transformed.push((f.path.clone(), text)),
                    Err(e) => {
                        diagnostics.push(format!("file left unchanged: {e}"));
                        out.transformed.push((f.path.clone(), f.source.clone()));
                    }
                }
            }
            out.transformed.extend(project.raw_files.iter().cloned());
            out.transformed.sort_by(|a, b| a.0.cmp(&b.0));
        }
    }
    if options.debug {
        for s in &fe.stripped {
            let mut text = String::new();
            if let Some((pkg, _)) = s.qualified_name.rsplit_once('.') {
                text.push_str(&format!("package {pkg};\n\n"));
            }
            text.push_str(&class_to_string(&s.class));
            out.debug_files
                .push((format!("trigit-debug/{}.java", s.qualified_name), text));
        }
    }
    let render = ms(t_render);

    out.report = RunReport {
        triggers,
        errors,
        edits: edits
            .iter()
            .map(|e| EditSummary {
                file: e.file.clone(),
                origin: e.origin,
                start_line: e.start_line,
                end_line: e.end_line,
            })
            .collect(),
        diagnostics,
        timings_ms: Timings {
            model: 0.0,
            evaluate,
            action,
            render,
        },
    };
    out.edits = edits;
    out.frontend = fe;
    out
}

/// Loads the tree under `root` and runs [`evaluate_all`].
pub fn run(root: &Path, options: &EvalOptions) -> Result<RunOutput, LoadError> {
    let t = Instant::now();
    let project = build_project_model(root, options.lenient)?;
    let model = ms(t);
    let mut out = evaluate_all(&project, options);
    out.report.timings_ms.model = model;
    Ok(out)
}

/// Writes `(relative path, text)` pairs below `dir`.
pub fn write_tree(dir: &Path, files: &[(String, String)]) -> std::io::Result<()> {
    for (rel, text) in files {
        let path = dir.join(rel);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        std::fs::write(path, text)?;
    }
    Ok(())
}
