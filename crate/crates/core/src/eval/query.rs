//! Interpretation of compiled queries over the project model.
//!
//! Every boolean node carries a short factual reason ("class FieldMapper is
//! missing") and, where one exists, the source location backing it.

use std::collections::HashMap;

use crate::error::EvalError;
use crate::frontend::ir::*;
use crate::model::{
    BuildConfigModel, ClassModel, FieldModel, JavaFileModel, JavaVersion, Location, MethodModel,
    Modifiers, ProjectModel, Visibility,
};

/// Result of evaluating a boolean query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub value: bool,
    pub reason: String,
    pub evidence: Option<Location>,
}

impl Outcome {
    /// `"<reason>; file: <path>, line: <n>"`, or just the reason.
    pub fn explanation(&self) -> String {
        match &self.evidence {
            Some(l) => format!("{}; file: {}, line: {}", self.reason, l.file, l.line),
            None => self.reason.clone(),
        }
    }
}

#[derive(Debug, Clone)]
enum Value<'m> {
    Bool(bool),
    Int(i64),
    Str(String),
    Version(JavaVersion),
    Class(&'m ClassModel),
    Method(&'m MethodModel),
    Field(&'m FieldModel),
    JavaFile(&'m JavaFileModel),
    BuildConfig(&'m BuildConfigModel),
    Modifiers(&'m Modifiers, String, Location),
    Stream(Vec<Value<'m>>),
    /// Result of `findAny`; the string describes what was looked for.
    Optional(Option<Box<Value<'m>>>, String),
}

impl Value<'_> {
    fn type_name(&self) -> &'static str {
        match self {
            Value::Bool(_) => "boolean",
            Value::Int(_) => "long",
            Value::Str(_) => "String",
            Value::Version(_) => "JavaVersion",
            Value::Class(_) => "ClassModel",
            Value::Method(_) => "MethodModel",
            Value::Field(_) => "FieldModel",
            Value::JavaFile(_) => "JavaFileModel",
            Value::BuildConfig(_) => "BuildConfigModel",
            Value::Modifiers(..) => "Modifiers",
            Value::Stream(_) => "Stream",
            Value::Optional(..) => "Optional",
        }
    }

    fn name(&self) -> Option<&str> {
        match self {
            Value::Class(c) => Some(&c.name),
            Value::Method(m) => Some(&m.name),
            Value::Field(f) => Some(&f.name),
            Value::JavaFile(f) => Some(f.file_name()),
            _ => None,
        }
    }

    fn describe(&self) -> String {
        match self {
            Value::Class(c) => format!("class {}", c.name),
            Value::Method(m) if m.is_constructor => format!("constructor {}", m.name),
            Value::Method(m) => format!("method {}", m.name),
            Value::Field(f) => format!("field {}", f.name),
            Value::JavaFile(f) => format!("file {}", f.path),
            Value::BuildConfig(b) => format!("build configuration {}", b.path),
            Value::Modifiers(_, owner, _) => owner.clone(),
            Value::Str(s) => format!("\"{s}\""),
            Value::Int(n) => n.to_string(),
            Value::Bool(b) => b.to_string(),
            Value::Version(v) => format!("Java version {v}"),
            Value::Stream(_) | Value::Optional(..) => self.type_name().to_string(),
        }
    }

    fn location(&self) -> Option<Location> {
        let site = match self {
            Value::Class(c) => &c.decl,
            Value::Method(m) => &m.decl,
            Value::Field(f) => &f.decl,
            Value::Modifiers(_, _, l) => return Some(l.clone()),
            Value::JavaFile(f) => {
                return Some(Location {
                    file: f.path.clone(),
                    line: 1,
                })
            }
            Value::BuildConfig(b) => return Some(b.version_location.clone()),
            _ => return None,
        };
        Some(Location {
            file: site.file.clone(),
            line: site.line,
        })
    }

}

impl<'m> Value<'m> {
    fn modifiers(&self) -> Option<&'m Modifiers> {
        match *self {
            Value::Class(c) => Some(&c.modifiers),
            Value::Method(m) => Some(&m.modifiers),
            Value::Field(f) => Some(&f.modifiers),
            Value::Modifiers(m, ..) => Some(m),
            _ => None,
        }
    }
}

struct Ev<'m> {
    value: Value<'m>,
    reason: String,
    evidence: Option<Location>,
}

impl<'m> Ev<'m> {
    fn plain(value: Value<'m>) -> Self {
        let reason = value.describe();
        let evidence = value.location();
        Ev {
            value,
            reason,
            evidence,
        }
    }

    fn boolean(value: bool, reason: String, evidence: Option<Location>) -> Self {
        Ev {
            value: Value::Bool(value),
            reason,
            evidence,
        }
    }
}

/// Evaluates trigger queries; trigger references are followed through
/// `units` and memoized per evaluator.
pub struct Evaluator<'a> {
    model: &'a ProjectModel,
    units: &'a HashMap<String, &'a TrigItUnit>,
    memo: HashMap<String, Result<Outcome, EvalError>>,
    stack: Vec<String>,
    /// Lookup ambiguities noticed while evaluating.
    pub warnings: Vec<String>,
}

impl<'a> Evaluator<'a> {
    pub fn new(model: &'a ProjectModel, units: &'a HashMap<String, &'a TrigItUnit>) -> Self {
        Evaluator {
            model,
            units,
            memo: HashMap::new(),
            stack: Vec::new(),
            warnings: Vec::new(),
        }
    }

    /// Evaluates the query of the named unit.
    pub fn eval_unit(&mut self, name: &str) -> Result<Outcome, EvalError> {
        if let Some(r) = self.memo.get(name) {
            return r.clone();
        }
        if self.stack.iter().any(|s| s == name) {
            return Err(EvalError::Cycle(name.to_string()));
        }
        let Some(unit) = self.units.get(name).copied() else {
            return Err(EvalError::Unevaluable(name.to_string()));
        };
        self.stack.push(name.to_string());
        let r = self.eval_query(&unit.query);
        self.stack.pop();
        self.memo.insert(name.to_string(), r.clone());
        r
    }

    pub fn eval_query(&mut self, q: &Query) -> Result<Outcome, EvalError> {
        let ev = self.eval(q, &mut Vec::new())?;
        match ev.value {
            Value::Bool(value) => Ok(Outcome {
                value,
                reason: ev.reason,
                evidence: ev.evidence,
            }),
            other => Err(EvalError::Invalid(format!(
                "query yields {} instead of boolean",
                other.type_name()
            ))),
        }
    }

    fn find_class(&mut self, name: &str) -> Result<&'a ClassModel, EvalError> {
        let (idx, warning) = self.model.find_class(name);
        if let Some(w) = warning {
            self.warnings.push(w);
        }
        idx.map(|i| &self.model.classes[i])
            .ok_or_else(|| EvalError::Missing(format!("class {name}")))
    }

    fn eval(&mut self, q: &Query, env: &mut Vec<(String, Value<'a>)>) -> Result<Ev<'a>, EvalError> {
        let model = self.model;
        Ok(match &q.node {
            QueryNode::Source(kind) => Ev::plain(Value::Stream(match kind {
                SourceKind::Classes => model.classes.iter().map(Value::Class).collect(),
                SourceKind::JavaFiles => model.java_files.iter().map(Value::JavaFile).collect(),
                SourceKind::BuildConfigs => {
                    model.build_configs.iter().map(Value::BuildConfig).collect()
                }
            })),
            QueryNode::ContextClass(name) => Ev::plain(Value::Class(self.find_class(name)?)),
            QueryNode::Param(p) => match env.iter().rev().find(|(n, _)| n == p) {
                Some((_, v)) => Ev::plain(v.clone()),
                None => return Err(EvalError::Invalid(format!("unbound parameter {p}"))),
            },
            QueryNode::Literal(lit) => match lit {
                Lit::Bool(b) => Ev::boolean(*b, format!("constant {b}"), None),
                Lit::Int(n) => Ev::plain(Value::Int(*n)),
                Lit::Str(s) => Ev::plain(Value::Str(s.value.clone())),
                Lit::Version(n) => Ev::plain(Value::Version(JavaVersion::constant(*n))),
            },
            QueryNode::TriggerRef(name) => {
                let o = self.eval_unit(name)?;
                Ev::boolean(o.value, o.reason, o.evidence)
            }
            QueryNode::Not(inner) => {
                let e = self.eval_bool(inner, env)?;
                Ev::boolean(!e.0, e.1, e.2)
            }
            QueryNode::And(l, r) => {
                let a = self.eval_bool(l, env)?;
                if !a.0 {
                    return Ok(Ev::boolean(false, a.1, a.2));
                }
                let b = self.eval_bool(r, env)?;
                if !b.0 {
                    return Ok(Ev::boolean(false, b.1, b.2));
                }
                Ev::boolean(true, format!("{} and {}", a.1, b.1), a.2.or(b.2))
            }
            QueryNode::Or(l, r) => {
                let a = self.eval_bool(l, env)?;
                if a.0 {
                    return Ok(Ev::boolean(true, a.1, a.2));
                }
                let b = self.eval_bool(r, env)?;
                if b.0 {
                    return Ok(Ev::boolean(true, b.1, b.2));
                }
                Ev::boolean(false, format!("{} and {}", a.1, b.1), a.2.or(b.2))
            }
            QueryNode::Compare { op, lhs, rhs } => {
                let (Value::Int(a), Value::Int(b)) =
                    (self.eval(lhs, env)?.value, self.eval(rhs, env)?.value)
                else {
                    return Err(EvalError::Invalid("comparison of non-numbers".into()));
                };
                let holds = match op {
                    CompareOp::Eq => a == b,
                    CompareOp::Ne => a != b,
                    CompareOp::Lt => a < b,
                    CompareOp::Le => a <= b,
                    CompareOp::Gt => a > b,
                    CompareOp::Ge => a >= b,
                };
                let shown = if holds { *op } else { negate(*op) };
                Ev::boolean(holds, format!("{a} {} {b}", symbol(shown)), None)
            }
            QueryNode::Access { recv, accessor } => self.access(recv, accessor, env)?,
            QueryNode::Stream { recv, op } => self.stream(recv, op, env)?,
            QueryNode::Test { recv, pred } => self.test(recv, pred, env)?,
        })
    }

    fn eval_bool(
        &mut self,
        q: &Query,
        env: &mut Vec<(String, Value<'a>)>,
    ) -> Result<(bool, String, Option<Location>), EvalError> {
        let e = self.eval(q, env)?;
        match e.value {
            Value::Bool(b) => Ok((b, e.reason, e.evidence)),
            other => Err(EvalError::Invalid(format!(
                "expected boolean, found {}",
                other.type_name()
            ))),
        }
    }

    fn access(
        &mut self,
        recv: &Query,
        accessor: &Accessor,
        env: &mut Vec<(String, Value<'a>)>,
    ) -> Result<Ev<'a>, EvalError> {
        // Class and version lookups on a whole source go through the model
        // so qualified names and the primary build config are honoured.
        if let QueryNode::Source(kind) = &recv.node {
            match (kind, accessor) {
                (SourceKind::Classes, Accessor::GetClass(n)) => {
                    return Ok(Ev::plain(Value::Class(self.find_class(&n.value)?)))
                }
                (SourceKind::BuildConfigs, Accessor::GetJavaVersion) => {
                    let cfg = self
                        .model
                        .primary_build_config()
                        .ok_or(EvalError::NoBuildConfig)?;
                    return Ok(Ev {
                        value: Value::Version(cfg.java_version.clone()),
                        reason: format!("Java version {}", cfg.java_version),
                        evidence: Some(cfg.version_location.clone()),
                    });
                }
                _ => {}
            }
        }
        let r = self.eval(recv, env)?;
        let invalid = |v: &Value| {
            EvalError::Invalid(format!("{accessor:?} is not defined on {}", v.type_name()))
        };
        let v = match (r.value, accessor) {
            (Value::Class(c), Accessor::GetMethod(n)) => {
                if c.methods.iter().filter(|m| m.name == n.value).count() > 1 {
                    self.warnings.push(format!(
                        "method `{}` is overloaded in {}; using the first declaration",
                        n.value, c.qualified_name
                    ));
                }
                Value::Method(c.method(&n.value).ok_or_else(|| {
                    EvalError::Missing(format!("method {} in class {}", n.value, c.name))
                })?)
            }
            (Value::Class(c), Accessor::GetField(n)) => {
                Value::Field(c.field(&n.value).ok_or_else(|| {
                    EvalError::Missing(format!("field {} in class {}", n.value, c.name))
                })?)
            }
            (Value::Class(c), Accessor::GetFields) => {
                Value::Stream(c.fields.iter().map(Value::Field).collect())
            }
            (Value::Class(c), Accessor::GetMethods) => {
                Value::Stream(c.methods.iter().map(Value::Method).collect())
            }
            (Value::JavaFile(f), Accessor::GetClasses) => Value::Stream(
                f.classes
                    .iter()
                    .map(|&i| Value::Class(&self.model.classes[i]))
                    .collect(),
            ),
            (Value::Stream(items), Accessor::GetClass(n)) => items
                .into_iter()
                .find(|v| matches!(v, Value::Class(c) if c.name == n.value || c.qualified_name == n.value))
                .ok_or_else(|| EvalError::Missing(format!("class {}", n.value)))?,
            (Value::BuildConfig(b), Accessor::GetJavaVersion) => {
                return Ok(Ev {
                    value: Value::Version(b.java_version.clone()),
                    reason: format!("Java version {}", b.java_version),
                    evidence: Some(b.version_location.clone()),
                })
            }
            (v, Accessor::GetName) => Value::Str(v.name().ok_or_else(|| invalid(&v))?.to_string()),
            (v, Accessor::GetModifiers) => {
                let m = v.modifiers().ok_or_else(|| invalid(&v))?;
                Value::Modifiers(m, v.describe(), v.location().unwrap_or(Location {
                    file: String::new(),
                    line: 0,
                }))
            }
            (v, _) => return Err(invalid(&v)),
        };
        Ok(Ev::plain(v))
    }

    fn with_param<T>(
        &mut self,
        env: &mut Vec<(String, Value<'a>)>,
        param: &str,
        value: Value<'a>,
        f: impl FnOnce(&mut Self, &mut Vec<(String, Value<'a>)>) -> Result<T, EvalError>,
    ) -> Result<T, EvalError> {
        env.push((param.to_string(), value));
        let r = f(self, env);
        env.pop();
        r
    }

    fn stream(
        &mut self,
        recv: &Query,
        op: &StreamOp,
        env: &mut Vec<(String, Value<'a>)>,
    ) -> Result<Ev<'a>, EvalError> {
        let elem_kind = match &recv.ty {
            ValueType::Stream(t) => match **t {
                ValueType::Class => "class",
                ValueType::Method => "method",
                ValueType::Field => "field",
                ValueType::JavaFile => "file",
                _ => "element",
            },
            _ => "element",
        };
        let r = self.eval(recv, env)?;
        let Value::Stream(items) = r.value else {
            return Err(EvalError::Invalid(format!(
                "stream operation on {}",
                r.value.type_name()
            )));
        };
        Ok(match op {
            StreamOp::Count => Ev::plain(Value::Int(items.len() as i64)),
            StreamOp::FindAny(n) => {
                let found = items.into_iter().find(|v| {
                    v.name() == Some(n.value.as_str())
                        || matches!(v, Value::Class(c) if c.qualified_name == n.value)
                });
                let what = format!("{elem_kind} {}", n.value);
                Ev {
                    evidence: found.as_ref().and_then(|v| v.location()),
                    value: Value::Optional(found.map(Box::new), what.clone()),
                    reason: what,
                }
            }
            StreamOp::Filter(l) => {
                let mut kept = Vec::new();
                for item in items {
                    let keep = self.with_param(env, &l.param, item.clone(), |s, env| {
                        s.eval_bool(&l.body, env)
                    })?;
                    if keep.0 {
                        kept.push(item);
                    }
                }
                Ev::plain(Value::Stream(kept))
            }
            StreamOp::Map(l) => {
                let mut out = Vec::new();
                for item in items {
                    let v = self.with_param(env, &l.param, item, |s, env| s.eval(&l.body, env))?;
                    out.push(v.value);
                }
                Ev::plain(Value::Stream(out))
            }
            StreamOp::AnyMatch(l) => {
                for item in items {
                    let m = self.with_param(env, &l.param, item, |s, env| {
                        s.eval_bool(&l.body, env)
                    })?;
                    if m.0 {
                        return Ok(Ev::boolean(true, m.1, m.2));
                    }
                }
                Ev::boolean(false, format!("no {elem_kind} matches"), None)
            }
        })
    }

    fn test(
        &mut self,
        recv: &Query,
        pred: &Predicate,
        env: &mut Vec<(String, Value<'a>)>,
    ) -> Result<Ev<'a>, EvalError> {
        let r = self.eval(recv, env)?;
        let bad = |v: &Value| EvalError::Invalid(format!("{pred:?} is not defined on {}", v.type_name()));
        Ok(match pred {
            Predicate::IsPresent => match &r.value {
                Value::Optional(Some(v), what) => {
                    Ev::boolean(true, format!("{what} is present"), v.location())
                }
                Value::Optional(None, what) => Ev::boolean(false, format!("{what} is missing"), None),
                v => return Err(bad(v)),
            },
            Predicate::IsPublic | Predicate::IsProtected | Predicate::IsPrivate => {
                let m = r.value.modifiers().ok_or_else(|| bad(&r.value))?;
                let wanted = match pred {
                    Predicate::IsPublic => Visibility::Public,
                    Predicate::IsProtected => Visibility::Protected,
                    _ => Visibility::Private,
                };
                Ev::boolean(
                    m.visibility == wanted,
                    format!("{} is {}", r.value.describe(), m.visibility.name()),
                    r.value.location(),
                )
            }
            Predicate::IsStatic | Predicate::IsFinal => {
                let m = r.value.modifiers().ok_or_else(|| bad(&r.value))?;
                let (holds, word) = if *pred == Predicate::IsStatic {
                    (m.is_static, "static")
                } else {
                    (m.is_final, "final")
                };
                let not = if holds { "" } else { "not " };
                Ev::boolean(
                    holds,
                    format!("{} is {not}{word}", r.value.describe()),
                    r.value.location(),
                )
            }
            Predicate::GreaterEqualThan(other) => {
                let o = self.eval(other, env)?;
                let (Value::Version(a), Value::Version(b)) = (&r.value, &o.value) else {
                    return Err(bad(&r.value));
                };
                let holds = a.greater_equal_than(b);
                let sym = if holds { ">=" } else { "<" };
                Ev::boolean(
                    holds,
                    format!("Java version {a} {sym} {b}"),
                    r.evidence.or(o.evidence),
                )
            }
            Predicate::Equals(other) => {
                let o = self.eval(other, env)?;
                let (holds, reason) = match (&r.value, &o.value) {
                    (Value::Version(a), Value::Version(b)) => {
                        let h = a == b;
                        (h, format!("Java version {a} {} {b}", if h { "==" } else { "!=" }))
                    }
                    (Value::Str(a), Value::Str(b)) => {
                        let h = a == b;
                        let verb = if h { "equals" } else { "does not equal" };
                        (h, format!("\"{a}\" {verb} \"{b}\""))
                    }
                    (Value::Int(a), Value::Int(b)) => {
                        let h = a == b;
                        (h, format!("{a} {} {b}", if h { "==" } else { "!=" }))
                    }
                    (v, _) => return Err(bad(v)),
                };
                Ev::boolean(holds, reason, r.evidence.or(o.evidence))
            }
        })
    }
}

fn negate(op: CompareOp) -> CompareOp {
    match op {
        CompareOp::Eq => CompareOp::Ne,
        CompareOp::Ne => CompareOp::Eq,
        CompareOp::Lt => CompareOp::Ge,
        CompareOp::Ge => CompareOp::Lt,
        CompareOp::Le => CompareOp::Gt,
        CompareOp::Gt => CompareOp::Le,
    }
}

fn symbol(op: CompareOp) -> &'static str {
    match op {
        CompareOp::Eq => "==",
        CompareOp::Ne => "!=",
        CompareOp::Lt => "<",
        CompareOp::Le => "<=",
        CompareOp::Gt => ">",
        CompareOp::Ge => ">=",
    }
}
