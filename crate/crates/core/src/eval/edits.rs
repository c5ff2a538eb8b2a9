//! Deferred source edits produced by actions, guard folds and removals.

use std::collections::BTreeMap;
use std::ops::Range;

use serde::Serialize;

use crate::frontend::ir::*;
use crate::model::{DeclSite, Element, Modifiers, Project, Selector, Visibility};
use crate::syntax::ast::{Modifier, Stmt, StmtKind, TokRange};
use crate::syntax::lexer::TriviaKind;
use crate::syntax::printer::line_indent;
use crate::syntax::ParsedFile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EditOrigin {
    ExplicitAction,
    GuardFold,
    MethodRemoval,
    CallsiteFold,
}

/// Replacement of a byte range of one original file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edit {
    pub file: String,
    pub file_index: usize,
    pub range: Range<usize>,
    pub replacement: String,
    pub origin: EditOrigin,
    pub unit: String,
    /// 1-based lines of the original text covered by `range`.
    pub start_line: u32,
    pub end_line: u32,
}

fn line_at(source: &str, offset: usize) -> u32 {
    source[..offset.min(source.len())].matches('\n').count() as u32 + 1
}

pub fn make_edit(
    file_index: usize,
    file: &ParsedFile,
    range: Range<usize>,
    replacement: String,
    origin: EditOrigin,
    unit: &str,
) -> Edit {
    let last = if range.end > range.start { range.end - 1 } else { range.end };
    // a removal that begins with the previous line's break starts below it
    let first = if range.end > range.start && file.source.as_bytes()[range.start] == b'\n' {
        range.start + 1
    } else {
        range.start
    };
    Edit {
        file: file.path.clone(),
        file_index,
        start_line: line_at(&file.source, first),
        end_line: line_at(&file.source, last).max(line_at(&file.source, first)),
        range,
        replacement,
        origin,
        unit: unit.to_string(),
    }
}

/// Bytes to delete so that a statement or declaration disappears together
/// with the line break that introduced it. Comments on the lines above stay.
pub fn removal_range(file: &ParsedFile, toks: TokRange) -> Range<usize> {
    let first = &file.tokens[toks.lo];
    let end = file.tokens[toks.hi - 1].span.end;
    let mut start = first.trivia_start();
    let mut newline = None;
    for t in first.leading.iter().rev() {
        if t.kind != TriviaKind::Whitespace {
            break;
        }
        if let Some(i) = t.text.find('\n') {
            newline = Some(t.span.start + i);
        }
    }
    match newline {
        Some(n) => start = n,
        None => {
            // trailing comments would otherwise be swallowed
            if let Some(c) = first.leading.iter().rposition(|t| t.is_comment()) {
                start = first.leading[c].span.end;
            }
        }
    }
    start..end
}

/// Text of a branch statement for splicing at the position of the `if`:
/// block braces dropped, inner lines shifted to the `if`'s indentation.
/// `None` when the branch is an empty block.
pub fn branch_text(file: &ParsedFile, branch: TokRange, if_start: usize) -> Option<String> {
    let toks = &file.tokens;
    let src = &file.source;
    let is_block = toks[branch.lo].is_punct("{") && toks[branch.hi - 1].is_punct("}");
    let (start, end) = if is_block {
        if branch.hi - branch.lo <= 2 {
            return None;
        }
        let first = &toks[branch.lo + 1];
        let close = &toks[branch.hi - 1];
        let start = first
            .leading
            .iter()
            .find(|t| t.is_comment())
            .map_or(first.span.start, |t| t.span.start);
        let end = close
            .leading
            .iter()
            .rev()
            .find(|t| t.is_comment())
            .map_or(toks[branch.hi - 2].span.end, |t| t.span.end);
        (start, end)
    } else {
        (toks[branch.lo].span.start, toks[branch.hi - 1].span.end)
    };
    let text = &src[start..end];
    let starts_line = src[..start]
        .rfind('\n')
        .map_or(0, |i| i + 1)
        .eq(&(start - line_indent(src, start).len()));
    if !starts_line {
        return Some(text.to_string());
    }
    let inner = line_indent(src, start);
    let outer = line_indent(src, if_start);
    let mut out = String::with_capacity(text.len());
    for (i, line) in text.split('\n').enumerate() {
        if i > 0 {
            out.push('\n');
            match line.strip_prefix(inner) {
                Some(rest) => {
                    out.push_str(outer);
                    out.push_str(rest);
                }
                None => out.push_str(line),
            }
        } else {
            out.push_str(line);
        }
    }
    Some(out)
}

/// Edit resolving one guard site for a trigger value.
pub fn fold_guard(file: &ParsedFile, site: &GuardSite, value: bool, unit: &str) -> Edit {
    let effective = value != site.negated;
    let branch = if effective {
        Some(site.then_toks)
    } else {
        site.else_toks
    };
    let if_start = site.span.start;
    match branch.and_then(|b| branch_text(file, b, if_start)) {
        Some(text) => make_edit(
            site.file_index,
            file,
            if_start..site.span.end,
            text,
            EditOrigin::GuardFold,
            unit,
        ),
        None => make_edit(
            site.file_index,
            file,
            removal_range(file, site.toks),
            String::new(),
            EditOrigin::GuardFold,
            unit,
        ),
    }
}

pub fn fold_guards(project: &Project, sites: &[GuardSite], value: bool, unit: &str) -> Vec<Edit> {
    sites
        .iter()
        .map(|s| fold_guard(&project.files[s.file_index], s, value, unit))
        .collect()
}

/// Deletion of a whole declaration, annotations included.
pub fn remove_declaration(project: &Project, decl: &DeclSite, origin: EditOrigin, unit: &str) -> Edit {
    let file = &project.files[decl.file_index];
    make_edit(
        decl.file_index,
        file,
        removal_range(file, decl.toks),
        String::new(),
        origin,
        unit,
    )
}

struct DeclState<'m> {
    site: &'m DeclSite,
    original: &'m Modifiers,
    visibility: (Visibility, String),
    is_static: (bool, String),
    is_final: (bool, String),
    removed: Option<String>,
}

/// Output of executing the explicit actions of satisfied units.
#[derive(Debug, Default)]
pub struct ActionOutput {
    pub edits: Vec<Edit>,
    pub diagnostics: Vec<String>,
    /// `(unit, message)` for every print step.
    pub prints: Vec<(String, String)>,
}

/// Executes the steps of the given action units in order. Steps targeting the
/// same declaration are combined so that each declaration gets a minimal,
/// non-overlapping set of modifier edits; a removal overrides other changes.
pub fn execute_actions(project: &Project, units: &[&TrigItUnit]) -> ActionOutput {
    let model = &project.model;
    let mut out = ActionOutput::default();
    let mut states: BTreeMap<(usize, usize), DeclState> = BTreeMap::new();
    for unit in units {
        for step in &unit.actions {
            let (target, mutation) = match step {
                ActionStep::Print { message, .. } => {
                    out.prints.push((unit.name.clone(), message.clone()));
                    continue;
                }
                ActionStep::Mutate {
                    target, mutation, ..
                } => (target, mutation),
            };
            let class = target.class().name();
            let selector = match target {
                Target::Class { .. } => Selector::Class(class),
                Target::Method { name, .. } => Selector::Method {
                    class,
                    name: &name.value,
                },
                Target::Field { name, .. } => Selector::Field {
                    class,
                    name: &name.value,
                },
            };
            let lookup = model.lookup(&selector);
            if let Some(w) = lookup.ambiguity {
                out.diagnostics.push(format!("{}: {w}", unit.name));
            }
            let (site, mods) = match lookup.element {
                Some(Element::Class(c)) => (&c.decl, &c.modifiers),
                Some(Element::Method(_, m)) => (&m.decl, &m.modifiers),
                Some(Element::Field(_, f)) => (&f.decl, &f.modifiers),
                None => {
                    out.diagnostics.push(format!(
                        "{}: cannot {}: target does not exist",
                        unit.name,
                        mutation.describe(target)
                    ));
                    continue;
                }
            };
            let st = states
                .entry((site.file_index, site.toks.lo))
                .or_insert_with(|| DeclState {
                    site,
                    original: mods,
                    visibility: (mods.visibility, String::new()),
                    is_static: (mods.is_static, String::new()),
                    is_final: (mods.is_final, String::new()),
                    removed: None,
                });
            let name = target.display_name();
            let mut already = |what: &str| {
                out.diagnostics
                    .push(format!("{}: {name} is already {what}", unit.name))
            };
            match *mutation {
                Mutation::SetVisibility(v) if st.visibility.0 == v => already(v.name()),
                Mutation::SetVisibility(v) => st.visibility = (v, unit.name.clone()),
                Mutation::SetStatic(b) if st.is_static.0 == b => {
                    already(if b { "static" } else { "non-static" })
                }
                Mutation::SetStatic(b) => st.is_static = (b, unit.name.clone()),
                Mutation::SetFinal(b) if st.is_final.0 == b => {
                    already(if b { "final" } else { "non-final" })
                }
                Mutation::SetFinal(b) => st.is_final = (b, unit.name.clone()),
                Mutation::Remove if st.removed.is_some() => already("removed"),
                Mutation::Remove => st.removed = Some(unit.name.clone()),
            }
        }
    }
    for st in states.values() {
        let file = &project.files[st.site.file_index];
        if let Some(unit) = &st.removed {
            out.edits.push(make_edit(
                st.site.file_index,
                file,
                removal_range(file, st.site.toks),
                String::new(),
                EditOrigin::ExplicitAction,
                unit,
            ));
            continue;
        }
        out.edits.extend(modifier_edits(file, st));
    }
    out
}

/// Deletes a modifier keyword together with the blanks after it.
fn token_deletion(file: &ParsedFile, tok: usize) -> Range<usize> {
    let span = file.tokens[tok].span;
    let rest = &file.source[span.end..];
    let blanks = rest.len() - rest.trim_start_matches([' ', '\t']).len();
    span.start..span.end + blanks
}

fn modifier_edits(file: &ParsedFile, st: &DeclState) -> Vec<Edit> {
    let toks = &file.tokens;
    let orig = st.original;
    let find = |pred: &dyn Fn(Modifier) -> bool| orig.items.iter().find(|(m, _)| pred(*m)).map(|x| x.1);
    let vis_tok = find(&|m| m.is_visibility());
    let list_start = orig
        .items
        .first()
        .map_or(toks[orig.toks.lo].span.start, |(_, t)| toks[*t].span.start);
    let list_end = toks[orig.toks.hi].span.start;
    // (range, text, unit); insertions are empty ranges
    let mut raw: Vec<(Range<usize>, String, &str)> = Vec::new();
    if st.visibility.0 != orig.visibility {
        let unit = st.visibility.1.as_str();
        match (vis_tok, st.visibility.0.keyword()) {
            (Some(t), Some(kw)) => raw.push((toks[t].span.start..toks[t].span.end, kw.into(), unit)),
            (Some(t), None) => raw.push((token_deletion(file, t), String::new(), unit)),
            (None, Some(kw)) => raw.push((list_start..list_start, format!("{kw} "), unit)),
            (None, None) => {}
        }
    }
    if st.is_static.0 != orig.is_static {
        let unit = st.is_static.1.as_str();
        if st.is_static.0 {
            let at = vis_tok.map_or(list_start, |t| toks[t + 1].span.start);
            raw.push((at..at, "static ".into(), unit));
        } else if let Some(t) = find(&|m| m == Modifier::Static) {
            raw.push((token_deletion(file, t), String::new(), unit));
        }
    }
    if st.is_final.0 != orig.is_final {
        let unit = st.is_final.1.as_str();
        if st.is_final.0 {
            raw.push((list_end..list_end, "final ".into(), unit));
        } else if let Some(t) = find(&|m| m == Modifier::Final) {
            raw.push((token_deletion(file, t), String::new(), unit));
        }
    }
    // stable: equal offsets keep visibility, static, final order
    raw.sort_by_key(|(r, _, _)| (r.start, r.end));
    let mut merged: Vec<(Range<usize>, String, &str)> = Vec::new();
    for (r, text, unit) in raw {
        match merged.last_mut() {
            Some(last) if last.0.end >= r.start => {
                last.0.end = last.0.end.max(r.end);
                last.1.push_str(&text);
            }
            _ => merged.push((r, text, unit)),
        }
    }
    merged
        .into_iter()
        .map(|(r, text, unit)| {
            make_edit(st.site.file_index, file, r, text, EditOrigin::ExplicitAction, unit)
        })
        .collect()
}

/// Deletes `name();` statements that call a satisfied action unit.
pub fn fold_call_sites(project: &Project, unit: &TrigItUnit, actions: &[&str]) -> (Vec<Edit>, Vec<String>) {
    let mut edits = Vec::new();
    let mut diags = Vec::new();
    let same_name_elsewhere = actions
        .iter()
        .filter(|a| a.rsplit('.').next() == Some(unit.method.as_str()))
        .count()
        > 1;
    for (file_index, file) in project.files.iter().enumerate() {
        let prefix = file.unit.package.as_deref().map(|p| format!("{p}.")).unwrap_or_default();
        crate::syntax::ast::walk_classes(&file.unit.classes, &mut |c, _| {
            // qualified names of nested classes are rebuilt from the model
            let qualified = project
                .model
                .classes
                .iter()
                .find(|m| m.decl.file_index == file_index && m.decl.toks == c.toks)
                .map_or_else(|| format!("{prefix}{}", c.name.name), |m| m.qualified_name.clone());
            if same_name_elsewhere && qualified != unit.class {
                return;
            }
            for m in c.methods() {
                if m.has_annotation(crate::model::TRIGIT_ANNOTATION) {
                    continue;
                }
                let Some(body) = &m.body else { continue };
                for s in &body.stmts {
                    scan_calls(file_index, file, s, &unit.method, &unit.name, true, &mut edits, &mut diags);
                }
            }
        });
    }
    (edits, diags)
}

#[allow(clippy::too_many_arguments)]
fn scan_calls(
    file_index: usize,
    file: &ParsedFile,
    s: &Stmt,
    method: &str,
    unit: &str,
    in_block: bool,
    edits: &mut Vec<Edit>,
    diags: &mut Vec<String>,
) {
    match &s.kind {
        StmtKind::Expr(e) if e.is_bare_call(method) => {
            if in_block {
                edits.push(make_edit(
                    file_index,
                    file,
                    removal_range(file, s.toks),
                    String::new(),
                    EditOrigin::CallsiteFold,
                    unit,
                ));
            } else {
                diags.push(format!(
                    "{}:{}: call to {unit} is the sole body of a branch; left in place",
                    file.path,
                    file.line_of(s.toks.lo)
                ));
            }
        }
        StmtKind::Block(b) => {
            for s in &b.stmts {
                scan_calls(file_index, file, s, method, unit, true, edits, diags);
            }
        }
        StmtKind::If {
            then, otherwise, ..
        } => {
            scan_calls(file_index, file, then, method, unit, false, edits, diags);
            if let Some(o) = otherwise {
                scan_calls(file_index, file, o, method, unit, false, edits, diags);
            }
        }
        _ => {}
    }
}

/// Drops edits that overlap an earlier (outer) edit in the same file.
pub fn resolve_conflicts(mut edits: Vec<Edit>) -> (Vec<Edit>, Vec<String>) {
    edits.sort_by(|a, b| {
        (a.file_index, a.range.start, std::cmp::Reverse(a.range.end))
            .cmp(&(b.file_index, b.range.start, std::cmp::Reverse(b.range.end)))
    });
    let mut kept: Vec<Edit> = Vec::new();
    let mut diags = Vec::new();
    for e in edits {
        if let Some(prev) = kept.last() {
            let same_file = prev.file_index == e.file_index;
            let overlaps = e.range.start < prev.range.end
                || (e.range.start == prev.range.start && prev.range.is_empty() && e.range.is_empty());
            if same_file && overlaps {
                diags.push(format!(
                    "{}:{}: {:?} edit from {} overlaps a {:?} edit from {} and was dropped",
                    e.file, e.start_line, e.origin, e.unit, prev.origin, prev.unit
                ));
                continue;
            }
        }
        kept.push(e);
    }
    (kept, diags)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::compile_project;
    use crate::syntax::printer::{materialize, TextEdit};

    fn project(src: &str) -> Project {
        Project::from_sources(vec![("A.java".into(), src.into())], false).unwrap()
    }

    fn apply(p: &Project, edits: &[Edit]) -> String {
        let t: Vec<TextEdit> = edits
            .iter()
            .map(|e| TextEdit {
                range: e.range.clone(),
                text: e.replacement.clone(),
            })
            .collect();
        materialize(&p.files[0].source, &t).unwrap()
    }

    fn run_actions(src: &str) -> (String, ActionOutput) {
        let p = project(src);
        let fe = compile_project(&p.files);
        let units: Vec<&TrigItUnit> = fe.compiled().filter(|u| u.kind == UnitKind::Action).collect();
        let out = execute_actions(&p, &units);
        (apply(&p, &out.edits), out)
    }

    #[test]
    fn visibility_replacement() {
        let (text, out) = run_actions(
            "class A {\n    public final String simpleName() { return null; }\n\
             @TrigItMethod void a() { if (true) TrigIt.getMethod(simpleName()).setProtected(); }\n}",
        );
        assert_eq!(out.edits.len(), 1);
        assert_eq!(out.edits[0].replacement, "protected");
        assert!(text.contains("    protected final String simpleName()"));
    }

    #[test]
    fn already_private_is_noop() {
        let (_, out) = run_actions(
            "class A { private int f;\n@TrigItMethod void a() { if (true) TrigIt.getField(f).setPrivate(); } }",
        );
        assert!(out.edits.is_empty());
        assert_eq!(out.diagnostics, vec!["A.a: f is already private"]);
    }

    #[test]
    fn modifier_insertions_and_deletions() {
        let (text, _) = run_actions(
            "class A {\n    int x;\n    static final int y = 1;\n    public void m() {}\n\
             @TrigItMethod void a() { if (true) {\n\
             TrigIt.getField(x).setPublic(); TrigIt.getField(x).setStatic(true); TrigIt.getField(x).setFinal(true);\n\
             TrigIt.getField(y).setStatic(false); TrigIt.getField(y).setPrivate();\n\
             TrigIt.getMethod(m).setStatic(true);\n} }\n}",
        );
        assert!(text.contains("\n    public static final int x;\n"), "{text}");
        assert!(text.contains("\n    private final int y = 1;\n"), "{text}");
        assert!(text.contains("\n    public static void m() {}\n"), "{text}");
    }

    #[test]
    fn remove_method_span() {
        let src = "class A {\n    int keep;\n\n    void gone(int a) {\n        a = a + 1;\n        b();\n        c();\n    }\n    @TrigItMethod void a() { if (true) TrigIt.removeMethod(gone); }\n}";
        let (text, out) = run_actions(src);
        assert_eq!((out.edits[0].start_line, out.edits[0].end_line), (3, 8));
        assert_eq!(
            text,
            "class A {\n    int keep;\n    @TrigItMethod void a() { if (true) TrigIt.removeMethod(gone); }\n}"
        );
    }

    /// Truth table oracle: the retained code is `then` when
    /// `value != negated`, otherwise `else` or nothing.
    #[test]
    fn guard_fold_truth_table() {
        for value in [false, true] {
            for negated in [false, true] {
                for has_else in [false, true] {
                    let cond = if negated { "!t()" } else { "t()" };
                    let tail = if has_else { " else { b(); }" } else { "" };
                    let src = format!(
                        "class A {{\n    @TrigItMethod boolean t() {{ return true; }}\n    void m() {{\n        x();\n        if ({cond}) {{\n            a();\n        }}{tail}\n        y();\n    }}\n}}\n"
                    );
                    let p = project(&src);
                    let fe = compile_project(&p.files);
                    let u = fe.unit("A.t").unwrap();
                    let edits = fold_guards(&p, &u.guard_sites, value, "A.t");
                    let out = apply(&p, &edits);
                    let body: Vec<&str> = out
                        .lines()
                        .skip(3)
                        .take_while(|l| *l != "    }")
                        .map(str::trim)
                        .collect();
                    let expect = if value != negated {
                        vec!["x();", "a();", "y();"]
                    } else if has_else {
                        vec!["x();", "b();", "y();"]
                    } else {
                        vec!["x();", "y();"]
                    };
                    assert_eq!(body, expect, "value={value} negated={negated} else={has_else}\n{out}");
                    assert!(out.lines().all(|l| !l.contains("t()") || l.contains("boolean t()")));
                }
            }
        }
    }

    #[test]
    fn branch_reindent() {
        let src = "class A {\n    void m() {\n        if (t()) {\n            // note\n            a();\n            if (z) {\n                b();\n            }\n        }\n    }\n    @TrigItMethod boolean t() { return true; }\n}\n";
        let p = project(src);
        let fe = compile_project(&p.files);
        let edits = fold_guards(&p, &fe.unit("A.t").unwrap().guard_sites, true, "A.t");
        assert_eq!(
            apply(&p, &edits),
            "class A {\n    void m() {\n        // note\n        a();\n        if (z) {\n            b();\n        }\n    }\n    @TrigItMethod boolean t() { return true; }\n}\n"
        );
    }

    #[test]
    fn call_sites_and_conflicts() {
        let src = "class A {\n    void m() {\n        go();\n        if (c) go();\n    }\n    @TrigItMethod void go() { if (true) TrigIt.getMethod(m).setPublic(); }\n}\n";
        let p = project(src);
        let fe = compile_project(&p.files);
        let u = fe.unit("A.go").unwrap();
        let (edits, diags) = fold_call_sites(&p, u, &["A.go"]);
        assert_eq!(edits.len(), 1);
        assert_eq!(diags.len(), 1);
        let outer = remove_declaration(&p, &p.model.classes[0].methods[0].decl, EditOrigin::ExplicitAction, "x");
        let (kept, dropped) = resolve_conflicts(vec![edits[0].clone(), outer]);
        assert_eq!(kept.len(), 1);
        assert_eq!(kept[0].origin, EditOrigin::ExplicitAction);
        assert_eq!(dropped.len(), 1);
    }
}
