//! Discovery, validation and compilation of `@TrigItMethod` methods.

pub mod compile;
pub mod guards;
pub mod ir;
pub mod strip;
pub mod substitute;
pub mod validate;

use std::collections::HashSet;

use rayon::prelude::*;

use crate::model::DeclSite;
use crate::syntax::ast::{ClassDecl, ReturnType, StmtKind};
use crate::syntax::ParsedFile;
use compile::{compile_action, compile_query, CompileCtx, TriggerTable};
pub use ir::*;
use validate::{collect_trigit_methods, validate_trigit_method, CollectedMethod};

/// One discovered TrigIt method, compiled or not.
#[derive(Debug, Clone)]
pub struct UnitEntry {
    pub name: String,
    pub class: String,
    pub method: String,
    /// `None` when the return type is neither boolean nor void.
    pub kind: Option<UnitKind>,
    pub decl: DeclSite,
    pub unit: Option<TrigItUnit>,
    pub errors: Vec<EncodingError>,
}

/// A top-level class reduced to its TrigIt methods.
#[derive(Debug, Clone)]
pub struct StrippedClass {
    pub file: String,
    pub qualified_name: String,
    pub class: ClassDecl,
}

#[derive(Debug, Clone, Default)]
pub struct Frontend {
    /// In (file path, declaration order).
    pub units: Vec<UnitEntry>,
    pub stripped: Vec<StrippedClass>,
    pub diagnostics: Vec<String>,
}

impl Frontend {
    pub fn errors(&self) -> impl Iterator<Item = &EncodingError> {
        self.units.iter().flat_map(|u| u.errors.iter())
    }

    pub fn compiled(&self) -> impl Iterator<Item = &TrigItUnit> {
        self.units.iter().filter_map(|u| u.unit.as_ref())
    }

    pub fn entry(&self, name: &str) -> Option<&UnitEntry> {
        self.units.iter().find(|u| u.name == name)
    }

    pub fn unit(&self, name: &str) -> Option<&TrigItUnit> {
        self.entry(name).and_then(|u| u.unit.as_ref())
    }
}

fn decl_site(c: &CollectedMethod) -> DeclSite {
    let span = c.method.toks.span(&c.file.tokens);
    DeclSite {
        file_index: c.file_index,
        file: c.file.path.clone(),
        toks: c.method.toks,
        line: span.start_line,
        end_line: span.end_line,
    }
}

/// Runs the whole front end over parsed files (sorted by path).
pub fn compile_project(files: &[ParsedFile]) -> Frontend {
    let collected = collect_trigit_methods(files);
    let mut diagnostics = Vec::new();
    let mut stripped = Vec::new();
    let mut seen_tops: HashSet<*const ClassDecl> = HashSet::new();
    for c in &collected {
        if seen_tops.insert(c.top_class as *const _) {
            let s = strip::strip_for_evaluation(c.top_class);
            let prefix = c.file.unit.package.as_deref().map(|p| format!("{p}.")).unwrap_or_default();
            for name in &s.unreachable {
                diagnostics.push(format!(
                    "{}: TrigIt method {prefix}{name} is declared in a nested class and is unreachable",
                    c.file.path
                ));
            }
            stripped.push(StrippedClass {
                file: c.file.path.clone(),
                qualified_name: format!("{prefix}{}", c.top_class.name.name),
                class: s.class,
            });
        }
    }
    let reachable: Vec<&CollectedMethod> = collected.iter().filter(|c| c.depth == 0).collect();

    let mut triggers = TriggerTable::new();
    for c in &reachable {
        if matches!(&c.method.ret, ReturnType::Type(t) if t.text == "boolean") {
            triggers
                .entry(c.method.name.name.clone())
                .or_default()
                .push((c.qualified_class.clone(), c.unit_name()));
        }
    }
    let trigger_names: HashSet<String> = triggers.keys().cloned().collect();
    let (sites, site_diags) = guards::find_guard_sites(files, &triggers);
    diagnostics.extend(site_diags);

    let mut units: Vec<UnitEntry> = reachable
        .par_iter()
        .map(|c| compile_one(c, &triggers, &trigger_names, &reachable))
        .collect();

    let referenced: HashSet<String> = units
        .iter()
        .filter_map(|u| u.unit.as_ref())
        .flat_map(|u| {
            let mut refs = Vec::new();
            u.query.visit(&mut |q| {
                if let QueryNode::TriggerRef(r) = &q.node {
                    refs.push(r.clone());
                }
            });
            refs
        })
        .collect();
    for entry in &mut units {
        let Some(unit) = entry.unit.as_mut() else {
            continue;
        };
        if unit.kind != UnitKind::Trigger {
            continue;
        }
        unit.guard_sites = sites.iter().filter(|s| s.trigger == unit.name).cloned().collect();
        if unit.guard_sites.is_empty() && !referenced.contains(&unit.name) {
            let msg = format!("unused trigger: {} guards no statement", unit.name);
            unit.diagnostics.push(msg.clone());
            diagnostics.push(msg);
        }
    }
    Frontend {
        units,
        stripped,
        diagnostics,
    }
}

fn compile_one(
    c: &CollectedMethod,
    triggers: &TriggerTable,
    trigger_names: &HashSet<String>,
    all: &[&CollectedMethod],
) -> UnitEntry {
    let name = c.unit_name();
    let kind = match &c.method.ret {
        ReturnType::Void(_) => Some(UnitKind::Action),
        ReturnType::Type(t) if t.text == "boolean" => Some(UnitKind::Trigger),
        _ => None,
    };
    let mut entry = UnitEntry {
        name: name.clone(),
        class: c.qualified_class.clone(),
        method: c.method.name.name.clone(),
        kind,
        decl: decl_site(c),
        unit: None,
        errors: Vec::new(),
    };
    let overloads = all
        .iter()
        .filter(|o| o.qualified_class == c.qualified_class && o.method.name.name == c.method.name.name)
        .count();
    if overloads > 1 {
        entry.errors.push(EncodingError {
            unit: name.clone(),
            category: ErrorCategory::Ambiguous,
            file: c.file.path.clone(),
            span: crate::syntax::ast::TokRange::new(c.method.name.tok, c.method.name.tok + 1).span(&c.file.tokens),
            message: format!(
                "{} TrigIt methods named `{}` in {}",
                overloads, c.method.name.name, c.qualified_class
            ),
        });
    }
    let validated = match validate_trigit_method(&name, c.method, c.file) {
        Ok(v) => v,
        Err(errs) => {
            entry.errors.extend(errs);
            return entry;
        }
    };
    let ctx = CompileCtx {
        unit: &name,
        class: &c.qualified_class,
        file: c.file,
        triggers,
    };
    let query_source = substitute::name_substitute(validated.query, trigger_names);
    let query = compile_query(&ctx, &query_source).map_err(|e| entry.errors.push(e)).ok();
    let mut actions = Vec::new();
    for s in &validated.statements {
        let StmtKind::Expr(e) = &s.kind else { continue };
        let e = if validate::is_print_call(e) {
            e.clone()
        } else {
            substitute::name_substitute(e, trigger_names)
        };
        match compile_action(&ctx, &e) {
            Ok(a) => actions.push(a),
            Err(err) => entry.errors.push(err),
        }
    }
    if let (Some(query), true) = (query, entry.errors.is_empty()) {
        entry.unit = Some(TrigItUnit {
            name: name.clone(),
            class: c.qualified_class.clone(),
            method: c.method.name.name.clone(),
            kind: validated.kind,
            query,
            query_source,
            actions,
            diagnostics: Vec::new(),
            decl: entry.decl.clone(),
            guard_sites: Vec::new(),
        });
    }
    entry
}

#[cfg(test)]
mod tests {
    use super::*;

    fn files(srcs: &[(&str, &str)]) -> Vec<ParsedFile> {
        srcs.iter()
            .map(|(p, s)| ParsedFile::parse(s.to_string(), p).unwrap())
            .collect()
    }

    #[test]
    fn compiles_check_merge() {
        let f = files(&[(
            "Mapper.java",
            "class Mapper {\n  String simpleName;\n  public final String simpleName() { return simpleName; }\n\
             @TrigItMethod public static void checkMerge() {\n\
             if (!TrigIt.hasClass(\"Mapper\") || !TrigIt.hasClass(\"FieldMapper\")) {\n\
             TrigIt.getMethod(simpleName()).setProtected();\n} } }",
        )]);
        let fe = compile_project(&f);
        assert_eq!(fe.units.len(), 1);
        let u = fe.unit("Mapper.checkMerge").unwrap();
        assert_eq!(u.kind, UnitKind::Action);
        assert_eq!(u.actions.len(), 1);
        assert_eq!(
            u.actions[0].describe(),
            "set simpleName to protected"
        );
        assert_eq!(fe.stripped.len(), 1);
        assert_eq!(fe.stripped[0].class.members.len(), 1);
    }

    #[test]
    fn guard_sites_and_unused() {
        let f = files(&[(
            "A.java",
            "class A {\n@TrigItMethod boolean used() { return TrigIt.hasClass(\"A\"); }\n\
             @TrigItMethod boolean idle() { return TrigIt.hasClass(\"B\"); }\n\
             void m() { if (used()) x(); }\n}",
        )]);
        let fe = compile_project(&f);
        assert_eq!(fe.unit("A.used").unwrap().guard_sites.len(), 1);
        assert!(fe.unit("A.idle").unwrap().diagnostics[0].contains("unused trigger"));
        assert_eq!(fe.diagnostics.len(), 1);
    }

    #[test]
    fn overloads_are_ambiguous_and_failures_kept() {
        let f = files(&[(
            "A.java",
            "class A {\n@TrigItMethod boolean t() { return true; }\n\
             @TrigItMethod boolean t() { return false; }\n\
             @TrigItMethod boolean bad() { return TrigIt.frobnicate(); }\n\
             class N { @TrigItMethod boolean hidden() { return true; } }\n}",
        )]);
        let fe = compile_project(&f);
        let names: Vec<_> = fe.units.iter().map(|u| u.name.as_str()).collect();
        assert_eq!(names, vec!["A.t", "A.t", "A.bad"]);
        assert!(fe.units.iter().all(|u| u.unit.is_none()));
        let cats: Vec<_> = fe.errors().map(|e| e.category).collect();
        assert_eq!(
            cats,
            vec![ErrorCategory::Ambiguous, ErrorCategory::Ambiguous, ErrorCategory::UnknownApi]
        );
        assert!(fe.diagnostics.iter().any(|d| d.contains("A.N.hidden") && d.contains("unreachable")));
    }
}
