use std::collections::HashSet;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use trigit_core::frontend::strip::strip_for_evaluation;
use trigit_core::frontend::substitute::name_substitute;
use trigit_core::syntax::ast::{ClassDecl, Member};
use trigit_core::syntax::lexer::{concat, tokenize};
use trigit_core::syntax::parser::parse_expr;
use trigit_core::syntax::printer::expr_to_string;
use trigit_core::testgen::{Gen, GenMember};
use trigit_core::ParsedFile;

#[test]
fn fuzz_round_trip_200() {
    let mut g = Gen::new(2024);
    for i in 0..200 {
        let (src, _) = g.program();
        let f = ParsedFile::parse(src.clone(), "F.java").unwrap_or_else(|e| panic!("{i}: {e}"));
        assert_eq!(concat(&f.tokens), src, "program {i}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn round_trip_any_seed(seed in any::<u64>()) {
        let (src, _) = Gen::new(seed).program();
        let f = ParsedFile::parse(src.clone(), "F.java").unwrap();
        prop_assert_eq!(concat(&f.tokens), src);
    }

    /// Lexing arbitrary printable text either fails or reproduces it.
    #[test]
    fn lexer_is_lossless(src in "[ -~\n\t]{0,200}") {
        if let Ok(toks) = tokenize(&src, "x") {
            prop_assert_eq!(concat(&toks), src);
        }
    }
}

fn find<'a>(classes: &'a [ClassDecl], name: &str) -> &'a ClassDecl {
    classes.iter().find(|c| c.name.name == name).unwrap()
}

fn brute_force_filter(f: &ParsedFile, c: &ClassDecl) -> ClassDecl {
    let mut out = c.clone();
    out.members.retain(|m| {
        let text = m.toks().text(&f.tokens);
        matches!(m, Member::Method(_)) && text.trim_start().starts_with("@TrigItMethod")
    });
    out
}

#[test]
fn strip_matches_brute_force_on_50_classes() {
    let mut g = Gen::new(55);
    let mut checked = 0;
    let mut kinds = [0usize; 4];
    while checked < 50 {
        let (src, gens) = g.program();
        let f = ParsedFile::parse(src, "S.java").unwrap();
        for gc in gens {
            let decl = find(&f.unit.classes, &gc.name);
            let stripped = strip_for_evaluation(decl);
            assert_eq!(stripped.class, brute_force_filter(&f, decl), "{}", gc.name);
            let names: Vec<&str> = stripped
                .class
                .members
                .iter()
                .map(|m| match m {
                    Member::Method(m) => m.name.name.as_str(),
                    _ => panic!("non-method survived"),
                })
                .collect();
            assert_eq!(names, gc.annotated_methods());
            assert_eq!(strip_for_evaluation(&stripped.class).class, stripped.class);
            for m in &gc.members {
                kinds[match m {
                    GenMember::Field(_) => 0,
                    GenMember::StaticBlock => 1,
                    GenMember::Method { .. } => 2,
                    GenMember::Class(_) => 3,
                }] += 1;
            }
            checked += 1;
        }
    }
    assert!(kinds.iter().all(|k| *k > 0), "{kinds:?}");
}

/// Independent model of a substitution input.
#[derive(Debug, Clone)]
enum Arg {
    Str(String),
    Int(i64),
    Field(Option<&'static str>, &'static str),
    Call(Option<&'static str>, &'static str, Vec<Arg>),
    Chain(Vec<(&'static str, Vec<Arg>)>),
}

fn render(a: &Arg) -> String {
    let args = |xs: &[Arg]| xs.iter().map(render).collect::<Vec<_>>().join(", ");
    match a {
        Arg::Str(s) => format!("\"{s}\""),
        Arg::Int(n) => n.to_string(),
        Arg::Field(q, n) => q.map_or(n.to_string(), |q| format!("{q}.{n}")),
        Arg::Call(q, n, xs) => {
            let head = q.map_or(n.to_string(), |q| format!("{q}.{n}"));
            format!("{head}({})", args(xs))
        }
        Arg::Chain(steps) => {
            let mut s = String::from("TrigIt");
            for (n, xs) in steps {
                s.push_str(&format!(".{n}({})", args(xs)));
            }
            s
        }
    }
}

/// Hand-rolled rule: member references collapse to the quoted member name;
/// TrigIt chains and literals stay, with their arguments rewritten.
fn oracle(a: &Arg) -> String {
    match a {
        Arg::Str(_) | Arg::Int(_) => render(a),
        Arg::Field(_, n) | Arg::Call(_, n, _) => format!("\"{n}\""),
        Arg::Chain(steps) => {
            let mut s = String::from("TrigIt");
            for (n, xs) in steps {
                let args: Vec<String> = xs.iter().map(oracle).collect();
                s.push_str(&format!(".{n}({})", args.join(", ")));
            }
            s
        }
    }
}

fn gen_arg(rng: &mut ChaCha8Rng, depth: usize) -> Arg {
    const Q: [Option<&str>; 3] = [None, Some("this"), Some("Helper")];
    const N: [&str; 5] = ["f", "size", "simpleName", "items", "other"];
    let q = *Q.choose(rng).unwrap();
    let n = *N.choose(rng).unwrap();
    match rng.gen_range(0..if depth == 0 { 4 } else { 6 }) {
        0 => Arg::Str(format!("s{}", rng.gen_range(0..9))),
        1 => Arg::Int(rng.gen_range(0..99)),
        2 => Arg::Field(q, n),
        3 => Arg::Call(q, n, vec![]),
        4 => Arg::Call(q, n, (0..rng.gen_range(1..3)).map(|_| gen_arg(rng, depth - 1)).collect()),
        _ => Arg::Chain(vec![
            ("getClass", vec![gen_arg(rng, depth - 1)]),
            ("getField", vec![gen_arg(rng, depth - 1)]),
        ]),
    }
}

fn substitute(src: &str) -> String {
    let toks = tokenize(src, "e").unwrap();
    let e = parse_expr(&toks, "e").unwrap();
    expr_to_string(&name_substitute(&e, &HashSet::new()))
}

#[test]
fn substitution_worked_example() {
    assert_eq!(
        substitute("TrigIt.getField(f).setPrivate()"),
        "TrigIt.getField(\"f\").setPrivate()"
    );
}

#[test]
fn substitution_matches_oracle_on_20_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut nested = 0;
    for i in 0..20 {
        let chain = Arg::Chain(vec![
            ("getMethod", vec![gen_arg(&mut rng, 2)]),
            ("setProtected", vec![]),
        ]);
        if let Arg::Chain(steps) = &chain {
            if matches!(&steps[0].1[0], Arg::Call(_, _, xs) if !xs.is_empty()) {
                nested += 1;
            }
        }
        let input = render(&chain);
        assert_eq!(substitute(&input), oracle(&chain), "case {i}: {input}");
    }
    assert!(nested > 0, "no case with discarded nested arguments");
}

#[test]
fn nested_arguments_are_discarded() {
    assert_eq!(
        substitute("TrigIt.getMethod(Helper.wrap(this.f, g(h(1)))).setPublic()"),
        "TrigIt.getMethod(\"wrap\").setPublic()"
    );
}
