//! Removal of everything but `@TrigItMethod` methods from a class.

use crate::model::TRIGIT_ANNOTATION;
use crate::syntax::ast::{ClassDecl, Member};

/// A stripped class plus the names of TrigIt methods that were erased along
/// with the nested classes declaring them.
#[derive(Debug, Clone, PartialEq)]
pub struct Stripped {
    pub class: ClassDecl,
    pub unreachable: Vec<String>,
}

/// Drops static blocks, fields, nested classes and unannotated methods.
///
/// Member removal runs outside-in: a nested class is erased before anything
/// inside it is looked at, so its TrigIt methods never survive.
pub fn strip_for_evaluation(class: &ClassDecl) -> Stripped {
    let mut unreachable = Vec::new();
    let mut out = class.clone();
    out.members.retain(|m| match m {
        Member::Method(m) => m.has_annotation(TRIGIT_ANNOTATION),
        Member::Class(inner) => {
            collect_trigit(inner, &class.name.name, &mut unreachable);
            false
        }
        Member::Field(_) | Member::StaticBlock(_) => false,
    });
    Stripped {
        class: out,
        unreachable,
    }
}

fn collect_trigit(class: &ClassDecl, prefix: &str, out: &mut Vec<String>) {
    let path = format!("{prefix}.{}", class.name.name);
    for m in &class.members {
        match m {
            Member::Method(m) if m.has_annotation(TRIGIT_ANNOTATION) => {
                out.push(format!("{path}.{}", m.name.name))
            }
            Member::Class(inner) => collect_trigit(inner, &path, out),
            _ => {}
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::ParsedFile;

    fn class(src: &str) -> ClassDecl {
        ParsedFile::parse(src.to_string(), "T.java")
            .unwrap()
            .unit
            .classes
            .remove(0)
    }

    fn kinds(c: &ClassDecl) -> Vec<String> {
        c.members
            .iter()
            .map(|m| match m {
                Member::Method(m) => format!("method {}", m.name.name),
                Member::Field(f) => format!("field {}", f.name.name),
                Member::StaticBlock(_) => "static".into(),
                Member::Class(c) => format!("class {}", c.name.name),
            })
            .collect()
    }

    #[test]
    fn keeps_only_trigit_methods() {
        let c = class(
            "class A { static { init(); } int a; private String b = \"x\";\n\
             void plain() { }\n\
             @TrigItMethod boolean t() { return TrigIt.hasClass(\"B\"); } }",
        );
        let s = strip_for_evaluation(&c);
        assert_eq!(kinds(&s.class), vec!["method t"]);
        assert!(s.unreachable.is_empty());
    }

    #[test]
    fn fixed_point_immediately() {
        let c = class("class A { @TrigItMethod boolean t() { return true; } }");
        let s = strip_for_evaluation(&c);
        assert_eq!(s.class, c);
        assert_eq!(strip_for_evaluation(&s.class), s);
    }

    #[test]
    fn nested_class_removed_wholesale() {
        let c = class(
            "class A { class N { @TrigItMethod boolean inner() { return true; }\n\
             class M { @TrigItMethod void deep() { if (inner()) TrigIt.getMethod(x).setPublic(); } } } }",
        );
        let s = strip_for_evaluation(&c);
        assert!(s.class.members.is_empty());
        assert_eq!(s.unreachable, vec!["A.N.inner", "A.N.M.deep"]);
    }
}
