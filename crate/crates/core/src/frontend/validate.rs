//! Discovery and shape validation of `@TrigItMethod` methods.

use super::ir::{EncodingError, ErrorCategory, UnitKind};
use crate::model::TRIGIT_ANNOTATION;
use crate::syntax::ast::{ClassDecl, Expr, ExprKind, Member, MethodDecl, ReturnType, Stmt, StmtKind, TokRange};
use crate::syntax::ParsedFile;

/// Root identifier of every TrigIt API chain.
pub const TRIGIT_ROOT: &str = "TrigIt";

/// An annotated method and where it was found.
#[derive(Debug, Clone)]
pub struct CollectedMethod<'a> {
    pub file_index: usize,
    pub file: &'a ParsedFile,
    pub qualified_class: String,
    pub top_class: &'a ClassDecl,
    /// Nesting depth of the declaring class; 0 for top-level classes.
    pub depth: usize,
    pub method: &'a MethodDecl,
}

impl CollectedMethod<'_> {
    pub fn unit_name(&self) -> String {
        format!("{}.{}", self.qualified_class, self.method.name.name)
    }
}

/// Every method carrying the annotation, in (file path, source order) order.
pub fn collect_trigit_methods(files: &[ParsedFile]) -> Vec<CollectedMethod<'_>> {
    fn go<'a>(
        out: &mut Vec<CollectedMethod<'a>>,
        file_index: usize,
        file: &'a ParsedFile,
        top: &'a ClassDecl,
        class: &'a ClassDecl,
        qualified: String,
        depth: usize,
    ) {
        for m in &class.members {
            match m {
                Member::Method(method) if method.has_annotation(TRIGIT_ANNOTATION) => {
                    out.push(CollectedMethod {
                        file_index,
                        file,
                        qualified_class: qualified.clone(),
                        top_class: top,
                        depth,
                        method,
                    })
                }
                Member::Class(inner) => go(
                    out,
                    file_index,
                    file,
                    top,
                    inner,
                    format!("{qualified}.{}", inner.name.name),
                    depth + 1,
                ),
                _ => {}
            }
        }
    }
    let mut out = Vec::new();
    for (i, f) in files.iter().enumerate() {
        let prefix = f.unit.package.as_deref().map(|p| format!("{p}.")).unwrap_or_default();
        for c in &f.unit.classes {
            go(&mut out, i, f, c, c, format!("{prefix}{}", c.name.name), 0);
        }
    }
    out
}

/// Parts of a method body that passed shape validation.
#[derive(Debug, Clone)]
pub struct Validated<'a> {
    pub kind: UnitKind,
    /// Return expression of a trigger, or condition of an action's `if`.
    pub query: &'a Expr,
    /// Statements in the action's then-branch.
    pub statements: Vec<&'a Stmt>,
}

pub fn is_print_call(e: &Expr) -> bool {
    if let ExprKind::Call {
        target: Some(t),
        name,
        ..
    } = &e.kind
    {
        if name == "println" || name == "print" {
            if let ExprKind::Field { target, name } = &t.kind {
                return (name == "out" || name == "err")
                    && matches!(&target.kind, ExprKind::Name(n) if n == "System");
            }
        }
    }
    false
}

pub fn is_trigit_chain(e: &Expr) -> bool {
    !matches!(e.kind, ExprKind::Name(_))
        && matches!(&e.chain_root().kind, ExprKind::Name(n) if n == TRIGIT_ROOT)
}

/// Checks the signature and body shape rules, reporting every violation.
pub fn validate_trigit_method<'a>(
    unit: &str,
    method: &'a MethodDecl,
    file: &ParsedFile,
) -> Result<Validated<'a>, Vec<EncodingError>> {
    let mut errors = Vec::new();
    let err = |errors: &mut Vec<EncodingError>, cat, toks: TokRange, msg: String| {
        errors.push(EncodingError {
            unit: unit.to_string(),
            category: cat,
            file: file.path.clone(),
            span: toks.span(&file.tokens),
            message: msg,
        })
    };
    if let Some(p) = method.params.first() {
        err(
            &mut errors,
            ErrorCategory::BadSignature,
            p.toks,
            "TrigIt methods must not declare parameters".into(),
        );
    }
    if let Some(t) = method.throws.first() {
        err(
            &mut errors,
            ErrorCategory::BadSignature,
            t.toks,
            "TrigIt methods must not declare a throws clause".into(),
        );
    }
    let kind = match &method.ret {
        ReturnType::Void(_) => Some(UnitKind::Action),
        ReturnType::Type(t) if t.text == "boolean" => Some(UnitKind::Trigger),
        ReturnType::Type(t) => {
            err(
                &mut errors,
                ErrorCategory::BadSignature,
                t.toks,
                format!("return type must be boolean or void, found {}", t.text),
            );
            None
        }
        ReturnType::Constructor => {
            err(
                &mut errors,
                ErrorCategory::BadSignature,
                method.toks,
                "a constructor cannot be a TrigIt method".into(),
            );
            None
        }
    };
    let Some(body) = &method.body else {
        err(
            &mut errors,
            ErrorCategory::BadBodyShape,
            method.toks,
            "TrigIt method has no body".into(),
        );
        return Err(errors);
    };
    let mut shape = |msg: &str, toks: TokRange| {
        err(&mut errors, ErrorCategory::BadBodyShape, toks, msg.to_string())
    };
    let mut validated = None;
    match kind {
        Some(UnitKind::Trigger) => match body.stmts.as_slice() {
            [Stmt {
                kind: StmtKind::Return(Some(e)),
                ..
            }] => {
                validated = Some(Validated {
                    kind: UnitKind::Trigger,
                    query: e,
                    statements: Vec::new(),
                })
            }
            [_] => shape(
                "a trigger body must be a single return of a query expression",
                body.toks,
            ),
            _ => shape(
                &format!(
                    "a trigger body must contain exactly one statement, found {}",
                    body.stmts.len()
                ),
                body.toks,
            ),
        },
        Some(UnitKind::Action) => match body.stmts.as_slice() {
            [Stmt {
                kind:
                    StmtKind::If {
                        cond,
                        then,
                        otherwise,
                    },
                ..
            }] => {
                let mut ok = true;
                if let Some(o) = otherwise {
                    shape("actions cannot have an else branch", o.toks);
                    ok = false;
                }
                let statements: Vec<&Stmt> = match &then.kind {
                    StmtKind::Block(b) => b.stmts.iter().collect(),
                    _ => vec![then.as_ref()],
                };
                for s in &statements {
                    let fine = matches!(&s.kind, StmtKind::Expr(e) if is_trigit_chain(e) || is_print_call(e));
                    if !fine {
                        shape(
                            "only TrigIt transformation statements and print statements may appear in an action",
                            s.toks,
                        );
                        ok = false;
                    }
                }
                if ok {
                    validated = Some(Validated {
                        kind: UnitKind::Action,
                        query: cond,
                        statements,
                    });
                }
            }
            [first, ..] if !matches!(first.kind, StmtKind::If { .. }) => shape(
                "the first statement of an action must be an if statement",
                first.toks,
            ),
            [] => shape("an action body must be a single if statement", body.toks),
            [_, rest @ ..] => shape(
                "transformation statements belong in the then-branch of the leading if",
                rest[0].toks,
            ),
        },
        None => {}
    }
    match validated {
        Some(v) if errors.is_empty() => Ok(v),
        _ => Err(errors),
    }
}
