//! Static resolution of the fixed names a unit refers to.

use crate::frontend::ir::*;
use crate::model::ProjectModel;

/// Resolves every selector with a fixed receiver against the model.
/// Existence tests (`hasClass`, `findAny(..).isPresent()`) are exempt, and
/// selectors under a lambda parameter cannot be resolved statically.
pub fn check_encoding(unit: &TrigItUnit, model: &ProjectModel) -> Vec<EncodingError> {
    let mut errors = Vec::new();
    let mut missing = |what: String, span| {
        errors.push(EncodingError {
            unit: unit.name.clone(),
            category: ErrorCategory::MissingReferent,
            file: unit.decl.file.clone(),
            span,
            message: format!("{what} does not exist"),
        })
    };
    unit.query.visit(&mut |q| {
        let QueryNode::Access { recv, accessor } = &q.node else {
            return;
        };
        match accessor {
            Accessor::GetClass(n) if matches!(recv.node, QueryNode::Source(SourceKind::Classes)) => {
                if !model.has_class(&n.value) {
                    missing(format!("class {}", n.value), q.span);
                }
            }
            Accessor::GetMethod(n) | Accessor::GetField(n) => {
                let Some(class) = static_class(recv) else { return };
                let Some(c) = model.find_class(class).0.map(|i| &model.classes[i]) else {
                    // reported by the receiver's own check
                    if matches!(recv.node, QueryNode::ContextClass(_)) {
                        missing(format!("class {class}"), q.span);
                    }
                    return;
                };
                let found = match accessor {
                    Accessor::GetMethod(_) => c.method(&n.value).is_some(),
                    _ => c.field(&n.value).is_some(),
                };
                if !found {
                    let kind = if matches!(accessor, Accessor::GetMethod(_)) {
                        "method"
                    } else {
                        "field"
                    };
                    missing(format!("{kind} {} in class {}", n.value, c.name), q.span);
                }
            }
            Accessor::GetJavaVersion
                if matches!(recv.node, QueryNode::Source(SourceKind::BuildConfigs))
                    && model.primary_build_config().is_none() =>
            {
                missing("a build configuration with a Java version".into(), q.span)
            }
            _ => {}
        }
    });
    for step in &unit.actions {
        let ActionStep::Mutate { target, span, .. } = step else {
            continue;
        };
        let class_name = target.class().name();
        let Some(c) = model.find_class(class_name).0.map(|i| &model.classes[i]) else {
            missing(format!("class {class_name}"), *span);
            continue;
        };
        match target {
            Target::Method { name, .. } if c.method(&name.value).is_none() => {
                missing(format!("method {} in class {}", name.value, c.name), *span)
            }
            Target::Field { name, .. } if c.field(&name.value).is_none() => {
                missing(format!("field {} in class {}", name.value, c.name), *span)
            }
            _ => {}
        }
    }
    errors
}

/// Class name a member selector is applied to, when known without
/// evaluation.
fn static_class(recv: &Query) -> Option<&str> {
    match &recv.node {
        QueryNode::ContextClass(c) => Some(c),
        QueryNode::Access {
            recv: inner,
            accessor: Accessor::GetClass(n),
        } if matches!(inner.node, QueryNode::Source(SourceKind::Classes)) => Some(&n.value),
        _ => None,
    }
}
