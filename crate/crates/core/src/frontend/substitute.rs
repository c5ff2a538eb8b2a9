//! Replacement of project member references by their names.
//!
//! `f`, `this.f`, `Q.f`, `m(..)`, `this.m(..)` and `Q.m(..)` all become the
//! string literal of the member name; arguments are dropped. Chains rooted at
//! `TrigIt`, at a lambda parameter or at a trigger call keep their shape and
//! only their arguments are rewritten.

use std::collections::HashSet;

use super::validate::TRIGIT_ROOT;
use crate::syntax::ast::{Expr, ExprKind, Literal};

/// Rewrites `e` until nothing changes. `triggers` are the simple names of
/// declared trigger methods; bare calls to them are kept.
pub fn name_substitute(e: &Expr, triggers: &HashSet<String>) -> Expr {
    let mut cur = e.clone();
    loop {
        let next = rewrite(&cur, triggers, &mut Vec::new());
        if next == cur {
            return next;
        }
        cur = next;
    }
}

fn literal(name: &str, like: &Expr) -> Expr {
    Expr {
        kind: ExprKind::Literal(Literal::string(name, true)),
        toks: like.toks,
    }
}

/// True when the chain must be preserved because the TrigIt API or a lambda
/// parameter sits at its root.
fn is_kept_root(root: &Expr, triggers: &HashSet<String>, params: &[String]) -> bool {
    match &root.kind {
        ExprKind::Name(n) => n == TRIGIT_ROOT || params.iter().any(|p| p == n),
        ExprKind::Call {
            target: None, name, ..
        } => triggers.contains(name),
        ExprKind::Literal(_) | ExprKind::Paren(_) => true,
        _ => false,
    }
}

fn rewrite(e: &Expr, triggers: &HashSet<String>, params: &mut Vec<String>) -> Expr {
    let kind = match &e.kind {
        ExprKind::Literal(_) | ExprKind::This => return e.clone(),
        ExprKind::Name(n) => {
            if n == TRIGIT_ROOT || params.iter().any(|p| p == n) {
                return e.clone();
            }
            return literal(n, e);
        }
        ExprKind::Paren(inner) => ExprKind::Paren(Box::new(rewrite(inner, triggers, params))),
        ExprKind::Call {
            target: None,
            name,
            args,
        } => {
            if !triggers.contains(name) {
                return literal(name, e);
            }
            ExprKind::Call {
                target: None,
                name: name.clone(),
                args: args.iter().map(|a| rewrite(a, triggers, params)).collect(),
            }
        }
        ExprKind::Call {
            target: Some(t),
            name,
            args,
        } => {
            if !is_kept_root(e.chain_root(), triggers, params) {
                return literal(name, e);
            }
            ExprKind::Call {
                target: Some(Box::new(rewrite(t, triggers, params))),
                name: name.clone(),
                args: args.iter().map(|a| rewrite(a, triggers, params)).collect(),
            }
        }
        ExprKind::Field { target, name } => {
            if !is_kept_root(e.chain_root(), triggers, params) {
                return literal(name, e);
            }
            ExprKind::Field {
                target: Box::new(rewrite(target, triggers, params)),
                name: name.clone(),
            }
        }
        ExprKind::Unary { op, operand } => ExprKind::Unary {
            op: *op,
            operand: Box::new(rewrite(operand, triggers, params)),
        },
        ExprKind::Binary { op, lhs, rhs } => ExprKind::Binary {
            op: *op,
            lhs: Box::new(rewrite(lhs, triggers, params)),
            rhs: Box::new(rewrite(rhs, triggers, params)),
        },
        ExprKind::Lambda { param, body } => {
            params.push(param.clone());
            let body = rewrite(body, triggers, params);
            params.pop();
            ExprKind::Lambda {
                param: param.clone(),
                body: Box::new(body),
            }
        }
    };
    Expr { kind, toks: e.toks }
}
