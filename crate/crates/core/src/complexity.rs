//! Token counts of TrigIt units split into trigger, action and structure.

use serde::Serialize;

use crate::frontend::validate::{collect_trigit_methods, validate_trigit_method};
use crate::frontend::{compile_project, UnitKind};
use crate::syntax::ast::TokRange;
use crate::syntax::lexer::{Token, TokenKind};
use crate::syntax::ParsedFile;

const IGNORED_PUNCT: [&str; 7] = [".", ",", "(", ")", "{", "}", ";"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TokenComplexity {
    pub unit: String,
    pub structure: usize,
    pub trigger: usize,
    pub action: usize,
    pub total: usize,
}

fn counted(t: &Token) -> bool {
    match t.kind {
        TokenKind::Eof => false,
        TokenKind::Punctuation => !IGNORED_PUNCT.contains(&t.text.as_str()),
        TokenKind::Identifier => t.text != "TrigIt",
        _ => true,
    }
}

/// Tokens in `toks` other than grouping and separator punctuation and the
/// `TrigIt` root.
pub fn count_tokens(file: &ParsedFile, toks: TokRange) -> usize {
    file.tokens[toks.lo..toks.hi].iter().filter(|t| counted(t)).count()
}

/// One row per valid unit, in declaration order. Explicit actions count the
/// statements of the guarded branch; implicit actions count the guard
/// conditions (`if`, negation, trigger name) at every site.
pub fn token_complexity(files: &[ParsedFile]) -> Vec<TokenComplexity> {
    let fe = compile_project(files);
    let mut rows = Vec::new();
    for cm in collect_trigit_methods(files) {
        let name = cm.unit_name();
        let Ok(v) = validate_trigit_method(&name, cm.method, cm.file) else {
            continue;
        };
        let method = count_tokens(cm.file, cm.method.toks);
        let trigger = count_tokens(cm.file, v.query.toks);
        let (action, inside) = match v.kind {
            UnitKind::Action => {
                let n: usize = v.statements.iter().map(|s| count_tokens(cm.file, s.toks)).sum();
                (n, n)
            }
            UnitKind::Trigger => {
                let sites = fe.unit(&name).map_or(&[][..], |u| u.guard_sites.as_slice());
                let n = sites
                    .iter()
                    .map(|s| count_tokens(&files[s.file_index], TokRange::new(s.toks.lo, s.cond_toks.hi)))
                    .sum();
                (n, 0)
            }
        };
        let structure = method - trigger - inside;
        rows.push(TokenComplexity {
            unit: name,
            structure,
            trigger,
            action,
            total: structure + trigger + action,
        });
    }
    rows
}

/// Column means in the order total, trigger, action, structure.
pub fn averages(rows: &[TokenComplexity]) -> [f64; 4] {
    if rows.is_empty() {
        return [0.0; 4];
    }
    let n = rows.len() as f64;
    let sum = |f: fn(&TokenComplexity) -> usize| rows.iter().map(f).sum::<usize>() as f64 / n;
    [
        sum(|r| r.total),
        sum(|r| r.trigger),
        sum(|r| r.action),
        sum(|r| r.structure),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(src: &str) -> Vec<TokenComplexity> {
        let f = ParsedFile::parse(src.to_string(), "A.java").unwrap();
        token_complexity(&[f])
    }

    #[test]
    fn check_merge_hand_count() {
        let r = rows(
            "class Mapper {\n  public final String simpleName() { return null; }\n  @TrigItMethod\n  public static void checkMerge() {\n    if (!TrigIt.hasClass(\"Mapper\") || !TrigIt.hasClass(\"FieldMapper\")) {\n      TrigIt.getMethod(simpleName()).setProtected();\n    }\n  }\n}\n",
        );
        // structure: @ TrigItMethod public static void checkMerge if
        // trigger:   ! hasClass "Mapper" || ! hasClass "FieldMapper"
        // action:    getMethod simpleName setProtected
        assert_eq!(
            r,
            vec![TokenComplexity {
                unit: "Mapper.checkMerge".into(),
                structure: 7,
                trigger: 7,
                action: 3,
                total: 17
            }]
        );
    }

    #[test]
    fn implicit_sites_and_empty_actions() {
        let r = rows(
            "class T {\n  void a() { if (!t()) x(); }\n  void b() { if (t()) { y(); } }\n  @TrigItMethod boolean t() { return TrigIt.hasClass(\"T\"); }\n  @TrigItMethod void e() { if (TrigIt.hasClass(\"T\")) { } }\n}\n",
        );
        assert_eq!((r[0].trigger, r[0].action, r[0].structure), (2, 5, 5));
        assert_eq!((r[1].action, r[1].total), (0, r[1].trigger + r[1].structure));
        let avg = averages(&r);
        assert_eq!(avg[2], 2.5);
    }
}
