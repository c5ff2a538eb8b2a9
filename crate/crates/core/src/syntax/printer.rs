//! Source reproduction and canonical pretty-printing.
//!
//! Unedited text always comes straight from the token stream, so a parse
//! followed by a print with no edits is the identity. Edits are byte-range
//! replacements over the original text.

use std::ops::Range;

use super::ast::*;
use super::lexer::{concat, Token};
use crate::error::OverlapError;

/// A replacement of `range` (bytes of the original text) by `text`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextEdit {
    pub range: Range<usize>,
    pub text: String,
}

/// Prints a compilation unit, applying `edits` over the original text.
pub fn print_unit(
    unit: &CompilationUnit,
    tokens: &[Token],
    edits: &[TextEdit],
) -> Result<String, OverlapError> {
    debug_assert_eq!(unit.toks.hi, tokens.len());
    materialize(&concat(tokens), edits)
}

/// Applies non-overlapping edits to `source`. Two insertions at the same
/// offset are applied in the order given.
pub fn materialize(source: &str, edits: &[TextEdit]) -> Result<String, OverlapError> {
    let mut sorted: Vec<&TextEdit> = edits.iter().collect();
    sorted.sort_by_key(|e| (e.range.start, e.range.end));
    let mut out = String::with_capacity(source.len());
    let mut at = 0usize;
    for e in sorted {
        if e.range.start < at || e.range.end > source.len() || e.range.start > e.range.end {
            return Err(OverlapError {
                file: String::new(),
                start: e.range.start,
                end: e.range.end,
            });
        }
        out.push_str(&source[at..e.range.start]);
        out.push_str(&e.text);
        at = e.range.end;
    }
    out.push_str(&source[at..]);
    Ok(out)
}

/// Indentation (leading spaces/tabs) of the line containing byte `at`.
pub fn line_indent(source: &str, at: usize) -> &str {
    let line_start = source[..at].rfind('\n').map_or(0, |i| i + 1);
    let rest = &source[line_start..];
    let n = rest
        .char_indices()
        .find(|(_, c)| *c != ' ' && *c != '\t')
        .map_or(rest.len(), |(i, _)| i);
    &rest[..n]
}

/// Canonical one-line rendering of an expression.
pub fn expr_to_string(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(&mut s, e);
    s
}

fn write_expr(s: &mut String, e: &Expr) {
    match &e.kind {
        ExprKind::Literal(l) => s.push_str(&l.raw),
        ExprKind::Name(n) => s.push_str(n),
        ExprKind::This => s.push_str("this"),
        ExprKind::Paren(inner) => {
            s.push('(');
            write_expr(s, inner);
            s.push(')');
        }
        ExprKind::Call { target, name, args } => {
            if let Some(t) = target {
                write_expr(s, t);
                s.push('.');
            }
            s.push_str(name);
            s.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    s.push_str(", ");
                }
                write_expr(s, a);
            }
            s.push(')');
        }
        ExprKind::Field { target, name } => {
            write_expr(s, target);
            s.push('.');
            s.push_str(name);
        }
        ExprKind::Unary { op, operand } => {
            s.push(match op {
                UnaryOp::Not => '!',
                UnaryOp::Neg => '-',
            });
            write_expr(s, operand);
        }
        ExprKind::Binary { op, lhs, rhs } => {
            write_expr(s, lhs);
            s.push(' ');
            s.push_str(op.symbol());
            s.push(' ');
            write_expr(s, rhs);
        }
        ExprKind::Lambda { param, body } => {
            s.push_str(param);
            s.push_str(" -> ");
            write_expr(s, body);
        }
    }
}

const INDENT: &str = "    ";

/// Canonical multi-line rendering of a class; used for debug dumps of
/// stripped classes where the tree no longer matches the token stream.
pub fn class_to_string(c: &ClassDecl) -> String {
    let mut s = String::new();
    write_class(&mut s, c, 0);
    s
}

fn write_head(s: &mut String, annotations: &[Annotation], mods: &ModifierList, depth: usize) {
    for a in annotations {
        s.push_str(&INDENT.repeat(depth));
        s.push('@');
        s.push_str(&a.name);
        s.push('\n');
    }
    s.push_str(&INDENT.repeat(depth));
    for (m, _) in &mods.items {
        s.push_str(m.keyword());
        s.push(' ');
    }
}

fn write_class(s: &mut String, c: &ClassDecl, depth: usize) {
    write_head(s, &c.annotations, &c.modifiers, depth);
    s.push_str("class ");
    s.push_str(&c.name.name);
    if let Some(e) = &c.extends {
        s.push_str(" extends ");
        s.push_str(&e.text);
    }
    if !c.implements.is_empty() {
        s.push_str(" implements ");
        let names: Vec<_> = c.implements.iter().map(|t| t.text.as_str()).collect();
        s.push_str(&names.join(", "));
    }
    s.push_str(" {\n");
    for (i, m) in c.members.iter().enumerate() {
        if i > 0 {
            s.push('\n');
        }
        match m {
            Member::Field(f) => {
                write_head(s, &f.annotations, &f.modifiers, depth + 1);
                s.push_str(&f.ty.text);
                s.push(' ');
                s.push_str(&f.name.name);
                if let Some(init) = &f.init {
                    s.push_str(" = ");
                    write_expr(s, init);
                }
                s.push_str(";\n");
            }
            Member::Method(m) => write_method(s, m, depth + 1),
            Member::StaticBlock(b) => {
                s.push_str(&INDENT.repeat(depth + 1));
                s.push_str("static ");
                write_block(s, &b.body, depth + 1);
                s.push('\n');
            }
            Member::Class(inner) => write_class(s, inner, depth + 1),
        }
    }
    s.push_str(&INDENT.repeat(depth));
    s.push_str("}\n");
}

fn write_method(s: &mut String, m: &MethodDecl, depth: usize) {
    write_head(s, &m.annotations, &m.modifiers, depth);
    if !m.is_constructor() {
        s.push_str(m.ret.text());
        s.push(' ');
    }
    s.push_str(&m.name.name);
    s.push('(');
    let params: Vec<_> = m
        .params
        .iter()
        .map(|p| format!("{} {}", p.ty.text, p.name.name))
        .collect();
    s.push_str(&params.join(", "));
    s.push(')');
    if !m.throws.is_empty() {
        s.push_str(" throws ");
        let names: Vec<_> = m.throws.iter().map(|t| t.text.as_str()).collect();
        s.push_str(&names.join(", "));
    }
    match &m.body {
        Some(b) => {
            s.push(' ');
            write_block(s, b, depth);
            s.push('\n');
        }
        None => s.push_str(";\n"),
    }
}

fn write_block(s: &mut String, b: &Block, depth: usize) {
    s.push_str("{\n");
    for st in &b.stmts {
        write_stmt(s, st, depth + 1);
    }
    s.push_str(&INDENT.repeat(depth));
    s.push('}');
}

fn write_stmt(s: &mut String, st: &Stmt, depth: usize) {
    s.push_str(&INDENT.repeat(depth));
    write_stmt_inline(s, st, depth);
    s.push('\n');
}

fn write_stmt_inline(s: &mut String, st: &Stmt, depth: usize) {
    match &st.kind {
        StmtKind::Block(b) => write_block(s, b, depth),
        StmtKind::If {
            cond,
            then,
            otherwise,
        } => {
            s.push_str("if (");
            write_expr(s, cond);
            s.push_str(") ");
            write_stmt_inline(s, then, depth);
            if let Some(o) = otherwise {
                s.push_str(" else ");
                write_stmt_inline(s, o, depth);
            }
        }
        StmtKind::Return(v) => {
            s.push_str("return");
            if let Some(v) = v {
                s.push(' ');
                write_expr(s, v);
            }
            s.push(';');
        }
        StmtKind::LocalVar { ty, name, init } => {
            s.push_str(&ty.text);
            s.push(' ');
            s.push_str(&name.name);
            if let Some(i) = init {
                s.push_str(" = ");
                write_expr(s, i);
            }
            s.push(';');
        }
        StmtKind::Expr(e) => {
            write_expr(s, e);
            s.push(';');
        }
        StmtKind::Assign { target, value } => {
            write_expr(s, target);
            s.push_str(" = ");
            write_expr(s, value);
            s.push(';');
        }
    }
}
