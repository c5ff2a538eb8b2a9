//! Location of `if (trigger())` statements that implicit actions fold.

use super::compile::TriggerTable;
use super::ir::GuardSite;
use crate::model::TRIGIT_ANNOTATION;
use crate::syntax::ast::{ClassDecl, Expr, ExprKind, Member, Stmt, StmtKind, UnaryOp};
use crate::syntax::ParsedFile;

/// `(trigger name, negated)` when the condition is `t()` or `!t()`, ignoring
/// parentheses.
pub fn guard_call(cond: &Expr) -> Option<(&str, bool)> {
    let c = cond.unparen();
    let (call, negated) = match &c.kind {
        ExprKind::Unary {
            op: UnaryOp::Not,
            operand,
        } => (operand.unparen(), true),
        _ => (c, false),
    };
    match &call.kind {
        ExprKind::Call {
            target: None,
            name,
            args,
        } if args.is_empty() => Some((name, negated)),
        _ => None,
    }
}

/// Every guard site of every trigger in `triggers`, in (file, source) order.
/// Sites whose trigger name cannot be resolved uniquely are reported as
/// diagnostics and skipped.
pub fn find_guard_sites(
    files: &[ParsedFile],
    triggers: &TriggerTable,
) -> (Vec<GuardSite>, Vec<String>) {
    let mut sites = Vec::new();
    let mut diagnostics = Vec::new();
    for (file_index, file) in files.iter().enumerate() {
        let prefix = file.unit.package.as_deref().map(|p| format!("{p}.")).unwrap_or_default();
        for c in &file.unit.classes {
            scan_class(
                file_index,
                file,
                c,
                format!("{prefix}{}", c.name.name),
                triggers,
                &mut sites,
                &mut diagnostics,
            );
        }
    }
    (sites, diagnostics)
}

fn scan_class(
    file_index: usize,
    file: &ParsedFile,
    class: &ClassDecl,
    qualified: String,
    triggers: &TriggerTable,
    sites: &mut Vec<GuardSite>,
    diagnostics: &mut Vec<String>,
) {
    for m in &class.members {
        let body = match m {
            Member::Method(m) if !m.has_annotation(TRIGIT_ANNOTATION) => m.body.as_ref(),
            Member::StaticBlock(s) => Some(&s.body),
            Member::Class(inner) => {
                scan_class(
                    file_index,
                    file,
                    inner,
                    format!("{qualified}.{}", inner.name.name),
                    triggers,
                    sites,
                    diagnostics,
                );
                None
            }
            _ => None,
        };
        let Some(body) = body else { continue };
        for s in &body.stmts {
            s.visit(&mut |s: &Stmt| {
                let StmtKind::If {
                    cond,
                    then,
                    otherwise,
                } = &s.kind
                else {
                    return;
                };
                let Some((name, negated)) = guard_call(cond) else {
                    return;
                };
                let Some(candidates) = triggers.get(name) else {
                    return;
                };
                let local: Vec<_> = candidates.iter().filter(|(c, _)| *c == qualified).collect();
                let pick = if local.is_empty() {
                    candidates.iter().collect()
                } else {
                    local
                };
                let line = file.line_of(s.toks.lo);
                if pick.len() != 1 {
                    diagnostics.push(format!(
                        "{}:{line}: guard `{name}()` matches several trigger methods; left untouched",
                        file.path
                    ));
                    return;
                }
                sites.push(GuardSite {
                    file_index,
                    file: file.path.clone(),
                    class: qualified.clone(),
                    trigger: pick[0].1.clone(),
                    negated,
                    has_else: otherwise.is_some(),
                    toks: s.toks,
                    span: s.toks.span(&file.tokens),
                    cond_toks: cond.toks,
                    then_toks: then.toks,
                    else_toks: otherwise.as_ref().map(|o| o.toks),
                });
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(entries: &[(&str, &str)]) -> TriggerTable {
        let mut t = TriggerTable::new();
        for (class, name) in entries {
            t.entry(name.to_string())
                .or_default()
                .push((class.to_string(), format!("{class}.{name}")));
        }
        t
    }

    #[test]
    fn finds_negated_and_else_sites() {
        let f = vec![ParsedFile::parse(
            "class A {\n\
             @TrigItMethod boolean t() { return true; }\n\
             @TrigItMethod void act() { if (t()) TrigIt.getMethod(\"m\").setPublic(); }\n\
             void m() {\n\
               if (!t()) { a(); }\n\
               if (x) { } else if ((t())) b(); else c();\n\
               if (t() && y) d();\n\
             }\n\
             static { if (t()) e(); }\n\
             }"
            .to_string(),
            "A.java",
        )
        .unwrap()];
        let (sites, diags) = find_guard_sites(&f, &table(&[("A", "t")]));
        assert!(diags.is_empty());
        let got: Vec<_> = sites
            .iter()
            .map(|s| (s.span.start_line, s.negated, s.has_else))
            .collect();
        assert_eq!(got, vec![(5, true, false), (6, false, true), (9, false, false)]);
        assert!(sites.iter().all(|s| s.trigger == "A.t"));
    }

    #[test]
    fn resolution_prefers_enclosing_class() {
        let f = vec![ParsedFile::parse(
            "class B { void m() { if (t()) a(); } }\nclass C { void m() { if (t()) a(); } }".to_string(),
            "B.java",
        )
        .unwrap()];
        let (sites, diags) = find_guard_sites(&f, &table(&[("B", "t"), ("X", "t")]));
        assert_eq!(sites.len(), 1);
        assert_eq!(sites[0].trigger, "B.t");
        assert_eq!(diags.len(), 1);
    }
}
