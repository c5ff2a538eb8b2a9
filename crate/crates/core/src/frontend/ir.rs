//! Interpretable forms of trigger queries and action statements.

use std::fmt;

use serde::Serialize;

use crate::model::{DeclSite, Visibility};
use crate::syntax::ast::{Expr, TokRange};
use crate::syntax::lexer::Span;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum UnitKind {
    /// `boolean` method; guards statements at call sites.
    Trigger,
    /// `void` method; explicit transformation steps.
    Action,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValueType {
    Bool,
    Int,
    Str,
    Version,
    Class,
    Method,
    Field,
    JavaFile,
    BuildConfig,
    Modifiers,
    Stream(Box<ValueType>),
    Optional(Box<ValueType>),
}

impl fmt::Display for ValueType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueType::Bool => f.write_str("boolean"),
            ValueType::Int => f.write_str("long"),
            ValueType::Str => f.write_str("String"),
            ValueType::Version => f.write_str("JavaVersion"),
            ValueType::Class => f.write_str("ClassModel"),
            ValueType::Method => f.write_str("MethodModel"),
            ValueType::Field => f.write_str("FieldModel"),
            ValueType::JavaFile => f.write_str("JavaFileModel"),
            ValueType::BuildConfig => f.write_str("BuildConfigModel"),
            ValueType::Modifiers => f.write_str("Modifiers"),
            ValueType::Stream(t) => write!(f, "Stream<{t}>"),
            ValueType::Optional(t) => write!(f, "Optional<{t}>"),
        }
    }
}

/// A name argument. `substituted` records whether it came from rewriting a
/// member access rather than from a string literal in the source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NameLit {
    pub value: String,
    pub substituted: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SourceKind {
    Classes,
    JavaFiles,
    BuildConfigs,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    pub node: QueryNode,
    pub ty: ValueType,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum QueryNode {
    Source(SourceKind),
    /// The class enclosing the TrigIt method (qualified name).
    ContextClass(String),
    /// Lambda parameter reference.
    Param(String),
    Access {
        recv: Box<Query>,
        accessor: Accessor,
    },
    Stream {
        recv: Box<Query>,
        op: StreamOp,
    },
    Test {
        recv: Box<Query>,
        pred: Predicate,
    },
    Compare {
        op: CompareOp,
        lhs: Box<Query>,
        rhs: Box<Query>,
    },
    Not(Box<Query>),
    And(Box<Query>, Box<Query>),
    Or(Box<Query>, Box<Query>),
    Literal(Lit),
    /// Call to another trigger method; evaluates that unit's query.
    TriggerRef(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Accessor {
    GetName,
    GetModifiers,
    GetFields,
    GetMethods,
    GetClasses,
    GetClass(NameLit),
    GetMethod(NameLit),
    GetField(NameLit),
    GetJavaVersion,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lambda {
    pub param: String,
    pub body: Box<Query>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StreamOp {
    Filter(Lambda),
    Map(Lambda),
    Count,
    AnyMatch(Lambda),
    FindAny(NameLit),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Predicate {
    IsPresent,
    IsPublic,
    IsProtected,
    IsPrivate,
    IsStatic,
    IsFinal,
    GreaterEqualThan(Box<Query>),
    Equals(Box<Query>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Lit {
    Str(NameLit),
    Int(i64),
    Bool(bool),
    Version(u32),
}

impl Query {
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Query)) {
        f(self);
        match &self.node {
            QueryNode::Source(_)
            | QueryNode::ContextClass(_)
            | QueryNode::Param(_)
            | QueryNode::Literal(_)
            | QueryNode::TriggerRef(_) => {}
            QueryNode::Access { recv, .. } => recv.visit(f),
            QueryNode::Stream { recv, op } => {
                recv.visit(f);
                match op {
                    StreamOp::Filter(l) | StreamOp::Map(l) | StreamOp::AnyMatch(l) => {
                        l.body.visit(f)
                    }
                    StreamOp::Count | StreamOp::FindAny(_) => {}
                }
            }
            QueryNode::Test { recv, pred } => {
                recv.visit(f);
                if let Predicate::GreaterEqualThan(q) | Predicate::Equals(q) = pred {
                    q.visit(f);
                }
            }
            QueryNode::Compare { lhs, rhs, .. }
            | QueryNode::And(lhs, rhs)
            | QueryNode::Or(lhs, rhs) => {
                lhs.visit(f);
                rhs.visit(f);
            }
            QueryNode::Not(q) => q.visit(f),
        }
    }

    /// Every name argument in the query, in visiting order.
    pub fn names(&self) -> Vec<&NameLit> {
        let mut out = Vec::new();
        self.visit(&mut |q| match &q.node {
            QueryNode::Access {
                accessor:
                    Accessor::GetClass(n) | Accessor::GetMethod(n) | Accessor::GetField(n),
                ..
            } => out.push(n),
            QueryNode::Stream {
                op: StreamOp::FindAny(n),
                ..
            } => out.push(n),
            QueryNode::Literal(Lit::Str(n)) => out.push(n),
            _ => {}
        });
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ClassRef {
    /// The class enclosing the TrigIt method (qualified name).
    Context { name: String },
    Named { name: NameLit },
}

impl ClassRef {
    pub fn name(&self) -> &str {
        match self {
            ClassRef::Context { name } => name,
            ClassRef::Named { name } => &name.value,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Target {
    Class { class: ClassRef },
    Method { class: ClassRef, name: NameLit },
    Field { class: ClassRef, name: NameLit },
}

impl Target {
    pub fn class(&self) -> &ClassRef {
        match self {
            Target::Class { class } | Target::Method { class, .. } | Target::Field { class, .. } => {
                class
            }
        }
    }

    /// Short human name: the member name, or the class name.
    pub fn display_name(&self) -> &str {
        match self {
            Target::Class { class } => class.name().rsplit('.').next().unwrap_or(class.name()),
            Target::Method { name, .. } | Target::Field { name, .. } => &name.value,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mutation {
    SetVisibility(Visibility),
    SetStatic(bool),
    SetFinal(bool),
    Remove,
}

impl Mutation {
    pub fn describe(&self, target: &Target) -> String {
        let name = target.display_name();
        match self {
            Mutation::SetVisibility(v) => format!("set {name} to {}", v.name()),
            Mutation::SetStatic(true) => format!("make {name} static"),
            Mutation::SetStatic(false) => format!("make {name} non-static"),
            Mutation::SetFinal(true) => format!("make {name} final"),
            Mutation::SetFinal(false) => format!("make {name} non-final"),
            Mutation::Remove => match target {
                Target::Method { .. } => format!("remove method {name}"),
                Target::Field { .. } => format!("remove field {name}"),
                Target::Class { .. } => format!("remove class {name}"),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ActionStep {
    Mutate {
        target: Target,
        mutation: Mutation,
        span: Span,
    },
    /// Print statement; its message goes to the run report.
    Print { message: String, span: Span },
}

impl ActionStep {
    pub fn describe(&self) -> String {
        match self {
            ActionStep::Mutate {
                target, mutation, ..
            } => mutation.describe(target),
            ActionStep::Print { message, .. } => format!("print \"{message}\""),
        }
    }
}

/// An `if` statement whose condition is a call to a trigger method.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GuardSite {
    pub file_index: usize,
    pub file: String,
    /// Qualified name of the class containing the statement.
    pub class: String,
    pub trigger: String,
    pub negated: bool,
    pub has_else: bool,
    pub toks: TokRange,
    pub span: Span,
    pub cond_toks: TokRange,
    pub then_toks: TokRange,
    pub else_toks: Option<TokRange>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ErrorCategory {
    BadSignature,
    BadBodyShape,
    UnknownApi,
    MissingReferent,
    Ambiguous,
}

impl fmt::Display for ErrorCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorCategory::BadSignature => "BAD_SIGNATURE",
            ErrorCategory::BadBodyShape => "BAD_BODY_SHAPE",
            ErrorCategory::UnknownApi => "UNKNOWN_API",
            ErrorCategory::MissingReferent => "MISSING_REFERENT",
            ErrorCategory::Ambiguous => "AMBIGUOUS",
        })
    }
}

/// An incorrectly encoded TrigIt method.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EncodingError {
    pub unit: String,
    pub category: ErrorCategory,
    pub file: String,
    pub span: Span,
    pub message: String,
}

impl fmt::Display for EncodingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} ({}:{}): {}",
            self.category, self.unit, self.file, self.span.start_line, self.message
        )
    }
}

/// A validated and compiled `@TrigItMethod`.
#[derive(Debug, Clone)]
pub struct TrigItUnit {
    /// `<qualified class>.<method>`.
    pub name: String,
    pub class: String,
    pub method: String,
    pub kind: UnitKind,
    pub query: Query,
    /// The query expression after name substitution.
    pub query_source: Expr,
    pub actions: Vec<ActionStep>,
    pub diagnostics: Vec<String>,
    pub decl: DeclSite,
    pub guard_sites: Vec<GuardSite>,
}
