//! Text rendering of reports and tables.

use std::fmt::Write as _;
use std::io::IsTerminal;

use trigit_core::classifier::CvResult;
use trigit_core::complexity::averages;
use trigit_core::{RunReport, Status, TokenComplexity};

#[derive(Debug, Clone, Copy)]
pub struct Style {
    pub color: bool,
}

impl Style {
    /// Color only on a terminal and only without `TRIGIT_NO_COLOR`.
    pub fn detect() -> Style {
        Style {
            color: std::env::var_os("TRIGIT_NO_COLOR").is_none() && std::io::stdout().is_terminal(),
        }
    }

    fn paint(&self, code: &str, s: &str) -> String {
        if self.color {
            format!("\x1b[{code}m{s}\x1b[0m")
        } else {
            s.to_string()
        }
    }

    fn heading(&self, s: &str) -> String {
        self.paint("1", s)
    }
}

fn status_tag(style: &Style, s: Status) -> String {
    match s {
        Status::Satisfied => style.paint("32", "[satisfied]"),
        Status::Unsatisfied => "[unsatisfied]".to_string(),
        Status::Unevaluable => style.paint("33", "[unevaluable]"),
    }
}

pub fn origin_name<T: serde::Serialize>(origin: &T) -> String {
    serde_json::to_value(origin)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

pub fn run_text(report: &RunReport, style: &Style) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}", style.heading("TRIGGERS"));
    if report.triggers.is_empty() {
        s.push_str("  (none)\n");
    }
    for t in &report.triggers {
        let _ = writeln!(s, "  {} {}: {}", status_tag(style, t.status), t.unit, t.explanation);
    }
    if !report.errors.is_empty() {
        let _ = writeln!(s, "{}", style.heading("ERRORS"));
        for e in &report.errors {
            let cat = style.paint("31", &e.category);
            let _ = writeln!(s, "  {cat} {} ({}:{}): {}", e.unit, e.file, e.line, e.message);
        }
    }
    if !report.edits.is_empty() {
        let _ = writeln!(s, "{}", style.heading("EDITS"));
        for e in &report.edits {
            let _ = writeln!(
                s,
                "  {}:{}-{} {}",
                e.file,
                e.start_line,
                e.end_line,
                origin_name(&e.origin)
            );
        }
    }
    if !report.diagnostics.is_empty() {
        let _ = writeln!(s, "{}", style.heading("DIAGNOSTICS"));
        for d in &report.diagnostics {
            let _ = writeln!(s, "  {d}");
        }
    }
    let t = &report.timings_ms;
    let _ = writeln!(
        s,
        "timings (ms): model {:.1}, evaluate {:.1}, action {:.1}, render {:.1}",
        t.model, t.evaluate, t.action, t.render
    );
    let _ = writeln!(
        s,
        "summary: {} triggers, {} satisfied, {} errors, {} edits",
        report.triggers.len(),
        report.satisfied_count(),
        report.errors.len(),
        report.edits.len()
    );
    s
}

pub fn tokens_text(rows: &[TokenComplexity]) -> String {
    let width = rows.iter().map(|r| r.unit.len()).max().unwrap_or(0).max(4);
    let mut s = format!(
        "{:<width$}  {:>7}  {:>7}  {:>7}  {:>9}\n",
        "Unit", "Total", "Trigger", "Action", "Structure"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{:<width$}  {:>7}  {:>7}  {:>7}  {:>9}",
            r.unit, r.total, r.trigger, r.action, r.structure
        );
    }
    let [total, trigger, action, structure] = averages(rows);
    let _ = writeln!(
        s,
        "{:<width$}  {total:>7.2}  {trigger:>7.2}  {action:>7.2}  {structure:>9.2}",
        "Avg."
    );
    s
}

pub fn classify_text(results: &[CvResult], examples: usize) -> String {
    let mut s = format!(
        "{:<10}  {:>8}  {:>6}  {:>9}  {:>6}\n",
        "System", "Accuracy", "F1", "Precision", "Recall"
    );
    for r in results {
        let m = &r.metrics;
        let _ = writeln!(
            s,
            "{:<10}  {:>8.3}  {:>6.3}  {:>9.3}  {:>6.3}",
            r.system, m.accuracy, m.f1, m.precision, m.recall
        );
    }
    if let Some(r) = results.first() {
        let _ = writeln!(s, "examples: {examples}, positive rate: {:.3}", r.positive_rate);
    }
    for r in results {
        let _ = writeln!(
            s,
            "{}: {} folds ({} degenerate), tp {} fp {} fn {} tn {}",
            r.system, r.folds, r.degenerate_folds, r.metrics.tp, r.metrics.fp, r.metrics.fn_, r.metrics.tn
        );
    }
    s
}
