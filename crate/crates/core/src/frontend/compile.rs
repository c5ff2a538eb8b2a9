//! Compilation of substituted trigger and action bodies into the IR.
//!
//! The API surface is closed: any operation not listed here is reported as
//! `UNKNOWN_API` rather than guessed at.

use std::collections::HashMap;

use super::ir::*;
use super::validate::{is_print_call, TRIGIT_ROOT};
use crate::model::Visibility;
use crate::syntax::ast::{BinaryOp, Expr, ExprKind, LitKind, TokRange, UnaryOp};
use crate::syntax::printer::expr_to_string;
use crate::syntax::ParsedFile;

/// Declared trigger methods by simple name: `(qualified class, unit name)`.
pub type TriggerTable = HashMap<String, Vec<(String, String)>>;

pub struct CompileCtx<'a> {
    pub unit: &'a str,
    /// Qualified name of the class declaring the unit.
    pub class: &'a str,
    pub file: &'a ParsedFile,
    pub triggers: &'a TriggerTable,
}

type CResult<T> = Result<T, EncodingError>;

impl CompileCtx<'_> {
    fn error(&self, category: ErrorCategory, toks: TokRange, message: String) -> EncodingError {
        EncodingError {
            unit: self.unit.to_string(),
            category,
            file: self.file.path.clone(),
            span: toks.span(&self.file.tokens),
            message,
        }
    }

    fn span(&self, toks: TokRange) -> crate::syntax::lexer::Span {
        toks.span(&self.file.tokens)
    }

    /// Resolves a trigger call: same-class declaration first, then a unique
    /// declaration anywhere in the project.
    pub fn resolve_trigger(&self, name: &str, toks: TokRange) -> CResult<String> {
        let candidates = self.triggers.get(name).map(Vec::as_slice).unwrap_or(&[]);
        let local: Vec<_> = candidates.iter().filter(|(c, _)| c == self.class).collect();
        let pick = if local.is_empty() {
            candidates.iter().collect()
        } else {
            local
        };
        match pick.as_slice() {
            [one] => Ok(one.1.clone()),
            [] => Err(self.error(
                ErrorCategory::MissingReferent,
                toks,
                format!("`{name}()` does not refer to a declared trigger method"),
            )),
            many => Err(self.error(
                ErrorCategory::Ambiguous,
                toks,
                format!(
                    "`{name}()` matches several trigger methods: {}",
                    many.iter().map(|c| c.1.as_str()).collect::<Vec<_>>().join(", ")
                ),
            )),
        }
    }
}

/// Token index of the method or field name in a member chain link.
fn name_tok(e: &Expr) -> TokRange {
    match &e.kind {
        ExprKind::Call {
            target: Some(t), ..
        }
        | ExprKind::Field { target: t, .. } => TokRange::new(t.toks.hi + 1, t.toks.hi + 2),
        _ => TokRange::new(e.toks.lo, (e.toks.lo + 1).min(e.toks.hi)),
    }
}

fn is_trigit_name(e: &Expr) -> bool {
    matches!(&e.kind, ExprKind::Name(n) if n == TRIGIT_ROOT)
}

/// Number suffix of a `TrigIt.JAVA<N>` constant.
pub fn version_constant(name: &str) -> Option<u32> {
    let n: u32 = name.strip_prefix("JAVA")?.parse().ok()?;
    (5..=9).contains(&n).then_some(n)
}

fn q(node: QueryNode, ty: ValueType, span: crate::syntax::lexer::Span) -> Query {
    Query { node, ty, span }
}

/// Compiles a query expression; the result must be boolean.
pub fn compile_query(ctx: &CompileCtx, e: &Expr) -> CResult<Query> {
    let query = compile_expr(ctx, e, &mut Vec::new())?;
    if query.ty != ValueType::Bool {
        return Err(ctx.error(
            ErrorCategory::BadBodyShape,
            e.toks,
            format!("a query must evaluate to boolean, this one yields {}", query.ty),
        ));
    }
    Ok(query)
}

fn name_arg(ctx: &CompileCtx, call: &Expr, op: &str, args: &[Expr]) -> CResult<NameLit> {
    match args {
        [Expr {
            kind: ExprKind::Literal(l),
            ..
        }] if l.kind == LitKind::String => Ok(NameLit {
            value: l.value.clone(),
            substituted: l.substituted,
        }),
        [other] => Err(ctx.error(
            ErrorCategory::BadBodyShape,
            other.toks,
            format!("the argument of `{op}` must be a name"),
        )),
        _ => Err(ctx.error(
            ErrorCategory::UnknownApi,
            name_tok(call),
            format!("`{op}` takes exactly one name argument, found {}", args.len()),
        )),
    }
}

fn no_args(ctx: &CompileCtx, call: &Expr, op: &str, args: &[Expr]) -> CResult<()> {
    if args.is_empty() {
        Ok(())
    } else {
        Err(ctx.error(
            ErrorCategory::UnknownApi,
            name_tok(call),
            format!("`{op}` takes no arguments, found {}", args.len()),
        ))
    }
}

fn compile_expr(ctx: &CompileCtx, e: &Expr, scope: &mut Vec<(String, ValueType)>) -> CResult<Query> {
    let span = ctx.span(e.toks);
    match &e.kind {
        ExprKind::Paren(inner) => compile_expr(ctx, inner, scope),
        ExprKind::Literal(l) => {
            let (lit, ty) = match l.kind {
                LitKind::String => (
                    Lit::Str(NameLit {
                        value: l.value.clone(),
                        substituted: l.substituted,
                    }),
                    ValueType::Str,
                ),
                LitKind::Number => match l.raw.trim_end_matches(['L', 'l']).parse::<i64>() {
                    Ok(n) => (Lit::Int(n), ValueType::Int),
                    Err(_) => {
                        return Err(ctx.error(
                            ErrorCategory::BadBodyShape,
                            e.toks,
                            format!("unsupported number literal {}", l.raw),
                        ))
                    }
                },
                LitKind::Bool => (Lit::Bool(l.value == "true"), ValueType::Bool),
                LitKind::Null => {
                    return Err(ctx.error(
                        ErrorCategory::BadBodyShape,
                        e.toks,
                        "null is not a query value".into(),
                    ))
                }
            };
            Ok(q(QueryNode::Literal(lit), ty, span))
        }
        ExprKind::Name(n) => match scope.iter().rev().find(|(p, _)| p == n) {
            Some((_, ty)) => Ok(q(QueryNode::Param(n.clone()), ty.clone(), span)),
            None => Err(ctx.error(
                ErrorCategory::UnknownApi,
                e.toks,
                format!("`{n}` is not a query value"),
            )),
        },
        ExprKind::This => Err(ctx.error(
            ErrorCategory::UnknownApi,
            e.toks,
            "`this` is not a query value".into(),
        )),
        ExprKind::Lambda { .. } => Err(ctx.error(
            ErrorCategory::BadBodyShape,
            e.toks,
            "lambdas may only appear as stream operation arguments".into(),
        )),
        ExprKind::Unary { op, operand } => {
            let inner = compile_expr(ctx, operand, scope)?;
            match op {
                UnaryOp::Not if inner.ty == ValueType::Bool => {
                    Ok(q(QueryNode::Not(Box::new(inner)), ValueType::Bool, span))
                }
                UnaryOp::Neg => match inner.node {
                    QueryNode::Literal(Lit::Int(n)) => {
                        Ok(q(QueryNode::Literal(Lit::Int(-n)), ValueType::Int, span))
                    }
                    _ => Err(ctx.error(
                        ErrorCategory::BadBodyShape,
                        e.toks,
                        "negation applies to number literals only".into(),
                    )),
                },
                UnaryOp::Not => Err(ctx.error(
                    ErrorCategory::BadBodyShape,
                    e.toks,
                    format!("`!` needs a boolean operand, found {}", inner.ty),
                )),
            }
        }
        ExprKind::Binary { op, lhs, rhs } => {
            let l = compile_expr(ctx, lhs, scope)?;
            let r = compile_expr(ctx, rhs, scope)?;
            let cmp = match op {
                BinaryOp::And | BinaryOp::Or => {
                    if l.ty != ValueType::Bool || r.ty != ValueType::Bool {
                        return Err(ctx.error(
                            ErrorCategory::BadBodyShape,
                            e.toks,
                            format!("`{}` needs boolean operands", op.symbol()),
                        ));
                    }
                    let node = if *op == BinaryOp::And {
                        QueryNode::And(Box::new(l), Box::new(r))
                    } else {
                        QueryNode::Or(Box::new(l), Box::new(r))
                    };
                    return Ok(q(node, ValueType::Bool, span));
                }
                BinaryOp::Eq => CompareOp::Eq,
                BinaryOp::Ne => CompareOp::Ne,
                BinaryOp::Lt => CompareOp::Lt,
                BinaryOp::Le => CompareOp::Le,
                BinaryOp::Gt => CompareOp::Gt,
                BinaryOp::Ge => CompareOp::Ge,
                _ => {
                    return Err(ctx.error(
                        ErrorCategory::BadBodyShape,
                        e.toks,
                        format!("arithmetic `{}` is not supported in queries", op.symbol()),
                    ))
                }
            };
            if l.ty != ValueType::Int || r.ty != ValueType::Int {
                return Err(ctx.error(
                    ErrorCategory::BadBodyShape,
                    e.toks,
                    format!("`{}` compares numbers, found {} and {}", op.symbol(), l.ty, r.ty),
                ));
            }
            Ok(q(
                QueryNode::Compare {
                    op: cmp,
                    lhs: Box::new(l),
                    rhs: Box::new(r),
                },
                ValueType::Bool,
                span,
            ))
        }
        ExprKind::Field { target, name } => {
            if is_trigit_name(target) {
                if let Some(n) = version_constant(name) {
                    return Ok(q(QueryNode::Literal(Lit::Version(n)), ValueType::Version, span));
                }
            }
            Err(ctx.error(
                ErrorCategory::UnknownApi,
                name_tok(e),
                format!("`{name}` is not a TrigIt API member"),
            ))
        }
        ExprKind::Call {
            target: None,
            name,
            args,
        } => {
            if !args.is_empty() {
                return Err(ctx.error(
                    ErrorCategory::BadBodyShape,
                    e.toks,
                    format!("trigger call `{name}` cannot take arguments"),
                ));
            }
            let unit = ctx.resolve_trigger(name, e.toks)?;
            Ok(q(QueryNode::TriggerRef(unit), ValueType::Bool, span))
        }
        ExprKind::Call {
            target: Some(t),
            name,
            args,
        } if is_trigit_name(t) => compile_root_call(ctx, e, name, args, span),
        ExprKind::Call {
            target: Some(t),
            name,
            args,
        } => {
            let recv = compile_expr(ctx, t, scope)?;
            compile_member_call(ctx, e, recv, name, args, scope, span)
        }
    }
}

fn compile_root_call(
    ctx: &CompileCtx,
    e: &Expr,
    name: &str,
    args: &[Expr],
    span: crate::syntax::lexer::Span,
) -> CResult<Query> {
    let source = |kind| q(QueryNode::Source(kind), ValueType::Stream(Box::new(elem_of(kind))), span);
    let access = |recv: Query, accessor, ty| {
        q(
            QueryNode::Access {
                recv: Box::new(recv),
                accessor,
            },
            ty,
            span,
        )
    };
    let context = || q(QueryNode::ContextClass(ctx.class.to_string()), ValueType::Class, span);
    Ok(match name {
        "getClasses" | "getJavaFiles" | "getBuildConfigs" => {
            no_args(ctx, e, name, args)?;
            source(match name {
                "getClasses" => SourceKind::Classes,
                "getJavaFiles" => SourceKind::JavaFiles,
                _ => SourceKind::BuildConfigs,
            })
        }
        "hasClass" => {
            let n = name_arg(ctx, e, name, args)?;
            let found = q(
                QueryNode::Stream {
                    recv: Box::new(source(SourceKind::Classes)),
                    op: StreamOp::FindAny(n),
                },
                ValueType::Optional(Box::new(ValueType::Class)),
                span,
            );
            q(
                QueryNode::Test {
                    recv: Box::new(found),
                    pred: Predicate::IsPresent,
                },
                ValueType::Bool,
                span,
            )
        }
        "getClass" => {
            let n = name_arg(ctx, e, name, args)?;
            access(source(SourceKind::Classes), Accessor::GetClass(n), ValueType::Class)
        }
        "getMethod" => {
            let n = name_arg(ctx, e, name, args)?;
            access(context(), Accessor::GetMethod(n), ValueType::Method)
        }
        "getField" => {
            let n = name_arg(ctx, e, name, args)?;
            access(context(), Accessor::GetField(n), ValueType::Field)
        }
        "getJavaVersion" => {
            no_args(ctx, e, name, args)?;
            access(
                source(SourceKind::BuildConfigs),
                Accessor::GetJavaVersion,
                ValueType::Version,
            )
        }
        _ => {
            return Err(ctx.error(
                ErrorCategory::UnknownApi,
                name_tok(e),
                format!("`{name}` is not a TrigIt query operation"),
            ))
        }
    })
}

fn elem_of(kind: SourceKind) -> ValueType {
    match kind {
        SourceKind::Classes => ValueType::Class,
        SourceKind::JavaFiles => ValueType::JavaFile,
        SourceKind::BuildConfigs => ValueType::BuildConfig,
    }
}

fn modifier_predicate(name: &str) -> Option<Predicate> {
    Some(match name {
        "isPublic" => Predicate::IsPublic,
        "isProtected" => Predicate::IsProtected,
        "isPrivate" => Predicate::IsPrivate,
        "isStatic" => Predicate::IsStatic,
        "isFinal" => Predicate::IsFinal,
        _ => return None,
    })
}

fn compile_lambda(
    ctx: &CompileCtx,
    arg: &[Expr],
    call: &Expr,
    op: &str,
    param_ty: &ValueType,
    scope: &mut Vec<(String, ValueType)>,
) -> CResult<Lambda> {
    let [Expr {
        kind: ExprKind::Lambda { param, body },
        ..
    }] = arg
    else {
        return Err(ctx.error(
            ErrorCategory::BadBodyShape,
            name_tok(call),
            format!("`{op}` expects a single lambda argument"),
        ));
    };
    scope.push((param.clone(), param_ty.clone()));
    let body = compile_expr(ctx, body, scope);
    scope.pop();
    Ok(Lambda {
        param: param.clone(),
        body: Box::new(body?),
    })
}

fn compile_member_call(
    ctx: &CompileCtx,
    e: &Expr,
    recv: Query,
    name: &str,
    args: &[Expr],
    scope: &mut Vec<(String, ValueType)>,
    span: crate::syntax::lexer::Span,
) -> CResult<Query> {
    let recv_ty = recv.ty.clone();
    let unknown = || {
        ctx.error(
            ErrorCategory::UnknownApi,
            name_tok(e),
            format!("`{name}` is not a TrigIt API operation on {recv_ty}"),
        )
    };
    let access = |recv: Query, accessor, ty| {
        Ok(q(
            QueryNode::Access {
                recv: Box::new(recv),
                accessor,
            },
            ty,
            span,
        ))
    };
    let test = |recv: Query, pred| {
        Ok(q(
            QueryNode::Test {
                recv: Box::new(recv),
                pred,
            },
            ValueType::Bool,
            span,
        ))
    };
    let stream = |recv: Query, op, ty| {
        Ok(q(
            QueryNode::Stream {
                recv: Box::new(recv),
                op,
            },
            ty,
            span,
        ))
    };
    let named = matches!(
        recv_ty,
        ValueType::Class | ValueType::Method | ValueType::Field
    );
    if let Some(pred) = modifier_predicate(name) {
        if named || recv_ty == ValueType::Modifiers {
            no_args(ctx, e, name, args)?;
            return test(recv, pred);
        }
        return Err(unknown());
    }
    match (&recv_ty, name) {
        (ValueType::Class | ValueType::Method | ValueType::Field | ValueType::JavaFile, "getName") => {
            no_args(ctx, e, name, args)?;
            access(recv, Accessor::GetName, ValueType::Str)
        }
        (ValueType::Class | ValueType::Method | ValueType::Field, "getModifiers") => {
            no_args(ctx, e, name, args)?;
            access(recv, Accessor::GetModifiers, ValueType::Modifiers)
        }
        (ValueType::Class, "getFields") => {
            no_args(ctx, e, name, args)?;
            access(recv, Accessor::GetFields, ValueType::Stream(Box::new(ValueType::Field)))
        }
        (ValueType::Class, "getMethods") => {
            no_args(ctx, e, name, args)?;
            access(recv, Accessor::GetMethods, ValueType::Stream(Box::new(ValueType::Method)))
        }
        (ValueType::JavaFile, "getClasses") => {
            no_args(ctx, e, name, args)?;
            access(recv, Accessor::GetClasses, ValueType::Stream(Box::new(ValueType::Class)))
        }
        (ValueType::Class, "getMethod") => {
            let n = name_arg(ctx, e, name, args)?;
            access(recv, Accessor::GetMethod(n), ValueType::Method)
        }
        (ValueType::Class, "getField") => {
            let n = name_arg(ctx, e, name, args)?;
            access(recv, Accessor::GetField(n), ValueType::Field)
        }
        (ValueType::BuildConfig, "getJavaVersion") => {
            no_args(ctx, e, name, args)?;
            access(recv, Accessor::GetJavaVersion, ValueType::Version)
        }
        (ValueType::Version, "greaterEqualThan") | (ValueType::Version | ValueType::Str | ValueType::Int, "equals") => {
            let [arg] = args else {
                return Err(ctx.error(
                    ErrorCategory::UnknownApi,
                    name_tok(e),
                    format!("`{name}` takes exactly one argument, found {}", args.len()),
                ));
            };
            let other = compile_expr(ctx, arg, scope)?;
            if other.ty != recv_ty {
                return Err(ctx.error(
                    ErrorCategory::BadBodyShape,
                    arg.toks,
                    format!("`{name}` compares {recv_ty} with {}", other.ty),
                ));
            }
            let pred = if name == "equals" {
                Predicate::Equals(Box::new(other))
            } else {
                Predicate::GreaterEqualThan(Box::new(other))
            };
            test(recv, pred)
        }
        (ValueType::Optional(_), "isPresent") => {
            no_args(ctx, e, name, args)?;
            test(recv, Predicate::IsPresent)
        }
        (ValueType::Stream(elem), _) => {
            let elem = (**elem).clone();
            match name {
                "count" => {
                    no_args(ctx, e, name, args)?;
                    stream(recv, StreamOp::Count, ValueType::Int)
                }
                "findAny" => {
                    if !matches!(
                        elem,
                        ValueType::Class | ValueType::Method | ValueType::Field | ValueType::JavaFile
                    ) {
                        return Err(unknown());
                    }
                    let n = name_arg(ctx, e, name, args)?;
                    stream(recv, StreamOp::FindAny(n), ValueType::Optional(Box::new(elem)))
                }
                "filter" | "anyMatch" => {
                    let l = compile_lambda(ctx, args, e, name, &elem, scope)?;
                    if l.body.ty != ValueType::Bool {
                        return Err(ctx.error(
                            ErrorCategory::BadBodyShape,
                            e.toks,
                            format!("the `{name}` lambda must yield boolean, found {}", l.body.ty),
                        ));
                    }
                    if name == "filter" {
                        stream(recv, StreamOp::Filter(l), recv_ty.clone())
                    } else {
                        stream(recv, StreamOp::AnyMatch(l), ValueType::Bool)
                    }
                }
                "map" => {
                    let l = compile_lambda(ctx, args, e, name, &elem, scope)?;
                    let out = ValueType::Stream(Box::new(l.body.ty.clone()));
                    stream(recv, StreamOp::Map(l), out)
                }
                _ => Err(unknown()),
            }
        }
        _ => Err(unknown()),
    }
}

/// Compiles one statement of an action's then-branch.
pub fn compile_action(ctx: &CompileCtx, e: &Expr) -> CResult<ActionStep> {
    let span = ctx.span(e.toks);
    if is_print_call(e) {
        let ExprKind::Call { args, .. } = &e.kind else {
            unreachable!()
        };
        let message = args.iter().map(print_text).collect::<Vec<_>>().join(", ");
        return Ok(ActionStep::Print { message, span });
    }
    let ExprKind::Call {
        target: Some(t),
        name,
        args,
    } = &e.kind
    else {
        return Err(ctx.error(
            ErrorCategory::BadBodyShape,
            e.toks,
            "a transformation statement must end in a mutation call".into(),
        ));
    };
    let mutation = match name.as_str() {
        "setPublic" => Some(Mutation::SetVisibility(Visibility::Public)),
        "setProtected" => Some(Mutation::SetVisibility(Visibility::Protected)),
        "setPrivate" => Some(Mutation::SetVisibility(Visibility::Private)),
        "setStatic" | "setFinal" => {
            let flag = match args.as_slice() {
                [] => true,
                [Expr {
                    kind: ExprKind::Literal(l),
                    ..
                }] if l.kind == LitKind::Bool => l.value == "true",
                _ => {
                    return Err(ctx.error(
                        ErrorCategory::BadBodyShape,
                        e.toks,
                        format!("`{name}` takes a boolean literal"),
                    ))
                }
            };
            Some(if name == "setStatic" {
                Mutation::SetStatic(flag)
            } else {
                Mutation::SetFinal(flag)
            })
        }
        "remove" => Some(Mutation::Remove),
        _ => None,
    };
    if let Some(mutation) = mutation {
        if !matches!(mutation, Mutation::SetStatic(_) | Mutation::SetFinal(_)) {
            no_args(ctx, e, name, args)?;
        }
        let target = compile_target(ctx, t)?;
        if mutation == Mutation::Remove && matches!(target, Target::Class { .. }) {
            return Err(ctx.error(
                ErrorCategory::UnknownApi,
                name_tok(e),
                "`remove` applies to methods and fields".into(),
            ));
        }
        return Ok(ActionStep::Mutate {
            target,
            mutation,
            span,
        });
    }
    if name == "removeMethod" || name == "removeField" {
        let class = if is_trigit_name(t) {
            ClassRef::Context {
                name: ctx.class.to_string(),
            }
        } else {
            match compile_target(ctx, t)? {
                Target::Class { class } => class,
                _ => {
                    return Err(ctx.error(
                        ErrorCategory::UnknownApi,
                        name_tok(e),
                        format!("`{name}` applies to a class"),
                    ))
                }
            }
        };
        let n = name_arg(ctx, e, name, args)?;
        let target = if name == "removeMethod" {
            Target::Method { class, name: n }
        } else {
            Target::Field { class, name: n }
        };
        return Ok(ActionStep::Mutate {
            target,
            mutation: Mutation::Remove,
            span,
        });
    }
    Err(ctx.error(
        ErrorCategory::UnknownApi,
        name_tok(e),
        format!("`{name}` is not a TrigIt transformation"),
    ))
}

fn compile_target(ctx: &CompileCtx, e: &Expr) -> CResult<Target> {
    let unknown = |what: &str| {
        ctx.error(
            ErrorCategory::UnknownApi,
            name_tok(e),
            format!("`{what}` does not select a class, method or field"),
        )
    };
    let ExprKind::Call {
        target: Some(t),
        name,
        args,
    } = &e.kind
    else {
        return Err(unknown(&expr_to_string(e)));
    };
    let context = || ClassRef::Context {
        name: ctx.class.to_string(),
    };
    if is_trigit_name(t) {
        let n = match name.as_str() {
            "getClass" | "getMethod" | "getField" => name_arg(ctx, e, name, args)?,
            _ => return Err(unknown(name)),
        };
        return Ok(match name.as_str() {
            "getClass" => Target::Class {
                class: ClassRef::Named { name: n },
            },
            "getMethod" => Target::Method {
                class: context(),
                name: n,
            },
            _ => Target::Field {
                class: context(),
                name: n,
            },
        });
    }
    let class = match compile_target(ctx, t)? {
        Target::Class { class } => class,
        _ => return Err(unknown(name)),
    };
    let n = match name.as_str() {
        "getMethod" | "getField" => name_arg(ctx, e, name, args)?,
        _ => return Err(unknown(name)),
    };
    Ok(if name == "getMethod" {
        Target::Method { class, name: n }
    } else {
        Target::Field { class, name: n }
    })
}

fn print_text(e: &Expr) -> String {
    match &e.kind {
        ExprKind::Literal(l) if l.kind == LitKind::String => l.value.clone(),
        ExprKind::Binary {
            op: BinaryOp::Add,
            lhs,
            rhs,
        } => print_text(lhs) + &print_text(rhs),
        _ => expr_to_string(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    /// Compiles `src` as the body expression of a method in class Mapper.
    fn with_ctx<T>(
        triggers: &[(&str, &str)],
        src: &str,
        f: impl FnOnce(&CompileCtx, &Expr) -> T,
    ) -> T {
        let file = ParsedFile::parse(
            format!("class Mapper {{ void u() {{ {src}; }} }}"),
            "Mapper.java",
        )
        .unwrap();
        let mut table = TriggerTable::new();
        for (class, name) in triggers {
            table
                .entry(name.to_string())
                .or_default()
                .push((class.to_string(), format!("{class}.{name}")));
        }
        let ctx = CompileCtx {
            unit: "Mapper.u",
            class: "Mapper",
            file: &file,
            triggers: &table,
        };
        let m = file.unit.classes[0].methods().next().unwrap();
        let crate::syntax::ast::StmtKind::Expr(e) = &m.body.as_ref().unwrap().stmts[0].kind else {
            panic!("not an expression statement: {src}")
        };
        f(&ctx, e)
    }

    fn query(src: &str) -> CResult<Query> {
        with_ctx(&[("Mapper", "t"), ("A", "dup"), ("B", "dup")], src, |c, e| {
            compile_query(c, e)
        })
    }

    fn lit(v: &str) -> NameLit {
        NameLit {
            value: v.into(),
            substituted: false,
        }
    }

    #[test]
    fn find_any_is_present() {
        let got = query("TrigIt.getClasses().findAny(\"name\").isPresent()").unwrap();
        let QueryNode::Test { recv, pred } = got.node else {
            panic!()
        };
        assert_eq!(pred, Predicate::IsPresent);
        let QueryNode::Stream { recv, op } = recv.node else {
            panic!()
        };
        assert_eq!(op, StreamOp::FindAny(lit("name")));
        assert_eq!(recv.node, QueryNode::Source(SourceKind::Classes));
    }

    #[test]
    fn fig3_condition_shape() {
        let got =
            query("!TrigIt.hasClass(\"Mapper\") || !TrigIt.hasClass(\"FieldMapper\")").unwrap();
        let QueryNode::Or(l, r) = got.node else {
            panic!()
        };
        for (side, name) in [(l, "Mapper"), (r, "FieldMapper")] {
            let QueryNode::Not(inner) = side.node else {
                panic!()
            };
            assert_eq!(inner.names(), vec![&lit(name)]);
        }
    }

    #[test]
    fn unknown_api() {
        let e = query("TrigIt.frobnicate()").unwrap_err();
        assert_eq!(e.category, ErrorCategory::UnknownApi);
        assert!(e.message.contains("frobnicate"));
        assert_eq!((e.span.start_col, e.span.end_col), (34, 44));
        let e = query("TrigIt.getJavaVersion().isPublic()").unwrap_err();
        assert_eq!(e.category, ErrorCategory::UnknownApi);
    }

    #[test]
    fn trigger_references() {
        assert_eq!(
            query("t()").unwrap().node,
            QueryNode::TriggerRef("Mapper.t".into())
        );
        assert_eq!(query("missing()").unwrap_err().category, ErrorCategory::MissingReferent);
        assert_eq!(query("dup()").unwrap_err().category, ErrorCategory::Ambiguous);
    }

    #[test]
    fn typing() {
        assert!(query("TrigIt.getJavaVersion().greaterEqualThan(TrigIt.JAVA6)").is_ok());
        assert!(query("TrigIt.getClass(\"A\").getMethods().filter(m -> m.isStatic()).count() >= 2").is_ok());
        assert!(query("TrigIt.getClasses().anyMatch(c -> c.getName().equals(\"X\"))").is_ok());
        assert!(query("TrigIt.getClasses().map(c -> c.getName()).count() == 3").is_ok());
        assert_eq!(query("TrigIt.getClass(\"A\")").unwrap_err().category, ErrorCategory::BadBodyShape);
        assert_eq!(query("TrigIt.JAVA4.isPublic()").unwrap_err().category, ErrorCategory::UnknownApi);
        assert_eq!(
            query("TrigIt.getJavaVersion().greaterEqualThan(\"1.6\")").unwrap_err().category,
            ErrorCategory::BadBodyShape
        );
    }

    #[test]
    fn actions() {
        let step = |src: &str| with_ctx(&[], src, compile_action);
        let ActionStep::Mutate { target, mutation, .. } =
            step("TrigIt.getMethod(\"simpleName\").setProtected()").unwrap()
        else {
            panic!()
        };
        assert_eq!(mutation, Mutation::SetVisibility(Visibility::Protected));
        assert_eq!(
            target,
            Target::Method {
                class: ClassRef::Context { name: "Mapper".into() },
                name: lit("simpleName")
            }
        );
        let ActionStep::Mutate { target, mutation, .. } =
            step("TrigIt.getClass(\"A\").removeField(\"f\")").unwrap()
        else {
            panic!()
        };
        assert_eq!(mutation, Mutation::Remove);
        assert_eq!(
            target,
            Target::Field {
                class: ClassRef::Named { name: lit("A") },
                name: lit("f")
            }
        );
        assert!(matches!(
            step("TrigIt.getField(\"f\").setStatic(false)").unwrap(),
            ActionStep::Mutate { mutation: Mutation::SetStatic(false), .. }
        ));
        assert!(matches!(
            step("System.out.println(\"done \" + 3)").unwrap(),
            ActionStep::Print { message, .. } if message == "done 3"
        ));
        assert_eq!(
            step("TrigIt.getMethod(\"m\").explode()").unwrap_err().category,
            ErrorCategory::UnknownApi
        );
    }
}
