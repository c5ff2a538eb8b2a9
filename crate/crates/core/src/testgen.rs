//! Seeded generators of subset programs and project corpora for property
//! tests, acceptance checks and benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classifier::Example;

/// Shape of a generated class, recorded independently of the parser.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenClass {
    pub name: String,
    pub members: Vec<GenMember>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenMember {
    Field(String),
    StaticBlock,
    Method { name: String, annotated: bool },
    Class(GenClass),
}

impl GenClass {
    /// Names of the directly declared `@TrigItMethod` methods, in order.
    pub fn annotated_methods(&self) -> Vec<&str> {
        self.members
            .iter()
            .filter_map(|m| match m {
                GenMember::Method {
                    name,
                    annotated: true,
                } => Some(name.as_str()),
                _ => None,
            })
            .collect()
    }
}

pub struct Gen {
    rng: ChaCha8Rng,
    next: usize,
}

const WORDS: &[&str] = &["alpha", "beta", "gamma", "delta", "count", "value", "items", "size"];

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            next: 0,
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn fresh(&mut self, prefix: &str) -> String {
        self.next += 1;
        format!("{prefix}{}", self.next)
    }

    fn word(&mut self) -> &'static str {
        WORDS.choose(&mut self.rng).unwrap()
    }

    /// Whitespace or comments between tokens.
    fn gap(&mut self) -> &'static str {
        *[
            " ", " ", " ", "  ", "\t", " /* c */ ", " /** doc\n * more */ ",
        ]
        .choose(&mut self.rng)
        .unwrap()
    }

    fn line_gap(&mut self, indent: &str) -> String {
        match self.rng.gen_range(0..6) {
            0 => format!("\n\n{indent}"),
            1 => format!("\n{indent}// TODO: tidy once {} is merged\n{indent}", self.word()),
            2 => format!(" // trailing\n{indent}"),
            _ => format!("\n{indent}"),
        }
    }

    pub fn literal(&mut self) -> String {
        match self.rng.gen_range(0..7) {
            0 => self.rng.gen_range(0..1000).to_string(),
            1 => format!("\"{}\"", self.word()),
            2 => "\"esc \\\" \\n \\\\\"".to_string(),
            3 => "'x'".to_string(),
            4 => "true".to_string(),
            5 => "null".to_string(),
            _ => format!("{}.5", self.rng.gen_range(0..9)),
        }
    }

    /// A random expression of bounded depth.
    pub fn expr(&mut self, depth: usize) -> String {
        if depth == 0 {
            return match self.rng.gen_range(0..3) {
                0 => self.literal(),
                _ => self.word().to_string(),
            };
        }
        let d = depth - 1;
        match self.rng.gen_range(0..10) {
            0 => self.literal(),
            1 => self.word().to_string(),
            2 => {
                let args = self.args(d);
                format!("{}({args})", self.word())
            }
            3 => {
                let (a, b) = (self.expr(d), self.word());
                let args = self.args(d);
                format!("{a}.{b}({args})")
            }
            4 => format!("this.{}", self.word()),
            5 => {
                let op = *["+", "-", "*", "==", "!=", "<", ">=", "&&", "||", "%"]
                    .choose(&mut self.rng)
                    .unwrap();
                let (a, g, b) = (self.expr(d), self.gap(), self.expr(d));
                format!("{a}{g}{op} {b}")
            }
            6 => format!("!{}", self.expr(d)),
            7 => format!("({})", self.expr(d)),
            8 => format!("{}(x -> x.{}())", self.word(), self.word()),
            _ => format!("TrigIt.getClass(\"{}\").{}()", self.word(), self.word()),
        }
    }

    fn args(&mut self, depth: usize) -> String {
        let n = self.rng.gen_range(0..3);
        (0..n).map(|_| self.expr(depth)).collect::<Vec<_>>().join(", ")
    }

    fn stmt(&mut self, depth: usize, indent: &str) -> String {
        let inner = format!("{indent}    ");
        match self.rng.gen_range(0..6) {
            0 => format!("int {} = {};", self.fresh("v"), self.expr(2)),
            1 => format!("{}({});", self.word(), self.args(1)),
            2 => format!("{} = {};", self.word(), self.expr(2)),
            3 if depth > 0 => {
                let cond = self.expr(2);
                let then = self.block(depth - 1, indent);
                if self.rng.gen_bool(0.5) {
                    let other = self.block(depth - 1, indent);
                    format!("if ({cond}) {then} else {other}")
                } else {
                    let s = self.stmt(0, &inner);
                    format!("if ({cond})\n{inner}{s}")
                }
            }
            4 => "return;".to_string(),
            _ => format!("String {};", self.fresh("s")),
        }
    }

    fn block(&mut self, depth: usize, indent: &str) -> String {
        let inner = format!("{indent}    ");
        let mut s = String::from("{");
        for _ in 0..self.rng.gen_range(0..4) {
            s.push_str(&self.line_gap(&inner));
            s.push_str(&self.stmt(depth, &inner));
        }
        s.push('\n');
        s.push_str(indent);
        s.push('}');
        s
    }

    fn method(&mut self, indent: &str, annotated: bool) -> (String, String) {
        let name = self.fresh("m");
        let mods = *["", "public ", "private static ", "protected final ", "static "]
            .choose(&mut self.rng)
            .unwrap();
        let text = if annotated {
            if self.rng.gen_bool(0.5) {
                format!(
                    "@TrigItMethod\n{indent}{mods}boolean {name}() {{\n{indent}    return TrigIt.hasClass(\"{}\");\n{indent}}}",
                    self.word()
                )
            } else {
                format!(
                    "@TrigItMethod {mods}void {name}() {{ if (TrigIt.hasClass(\"{}\")) {{ TrigIt.getMethod(\"{name}\").setPublic(); }} }}",
                    self.word()
                )
            }
        } else {
            let ann = if self.rng.gen_bool(0.2) { "@Override " } else { "" };
            let params = if self.rng.gen_bool(0.5) { "int a, String... rest" } else { "" };
            let body = self.block(2, indent);
            format!("{ann}{mods}void {name}({params}){} {body}", if self.rng.gen_bool(0.2) { " throws Exception" } else { "" })
        };
        (name, text)
    }

    /// A class with fields, static blocks, nested classes and plain and
    /// annotated methods.
    pub fn class(&mut self, depth: usize, indent: &str) -> (String, GenClass) {
        let name = format!("C{}", self.fresh(""));
        let inner = format!("{indent}    ");
        let mut members = Vec::new();
        let mut text = format!(
            "{}class {name}{} {{",
            *["", "public ", "final ", "abstract "].choose(&mut self.rng).unwrap(),
            if self.rng.gen_bool(0.3) { " extends Base implements Runnable, java.io.Serializable" } else { "" }
        );
        for _ in 0..self.rng.gen_range(1..7) {
            text.push_str(&self.line_gap(&inner));
            match self.rng.gen_range(0..8) {
                0 => {
                    let f = self.fresh("f");
                    let init = if self.rng.gen_bool(0.5) {
                        format!(" = {}", self.expr(2))
                    } else {
                        String::new()
                    };
                    text.push_str(&format!("private static final java.util.List<String> {f}{init};"));
                    members.push(GenMember::Field(f));
                }
                1 => {
                    let b = self.block(1, &inner);
                    text.push_str(&format!("static {b}"));
                    members.push(GenMember::StaticBlock);
                }
                2 if depth > 0 => {
                    let (t, c) = self.class(depth - 1, &inner);
                    text.push_str(&format!("static {t}"));
                    members.push(GenMember::Class(c));
                }
                3 | 4 => {
                    let (n, t) = self.method(&inner, true);
                    text.push_str(&t);
                    members.push(GenMember::Method {
                        name: n,
                        annotated: true,
                    });
                }
                _ => {
                    let (n, t) = self.method(&inner, false);
                    text.push_str(&t);
                    members.push(GenMember::Method {
                        name: n,
                        annotated: false,
                    });
                }
            }
        }
        text.push('\n');
        text.push_str(indent);
        text.push('}');
        (text, GenClass { name, members })
    }

    /// A complete compilation unit.
    pub fn program(&mut self) -> (String, Vec<GenClass>) {
        let mut text = String::new();
        if self.rng.gen_bool(0.6) {
            text.push_str(&format!("package p.{};\n\n", self.word()));
        }
        for _ in 0..self.rng.gen_range(0..3) {
            text.push_str(&format!("import java.util.{};\n", self.word()));
        }
        if self.rng.gen_bool(0.3) {
            text.push_str("import static java.lang.Math.*;\n");
        }
        let mut classes = Vec::new();
        for _ in 0..self.rng.gen_range(1..3) {
            let (t, c) = self.class(2, "");
            text.push('\n');
            text.push_str(&t);
            text.push('\n');
            classes.push(c);
        }
        if self.rng.gen_bool(0.3) {
            text.push_str("// end\n");
        }
        (text, classes)
    }
}

/// A project of `files` classes spread over packages with `units` TrigIt
/// methods (alternating triggers with guard sites and explicit actions) and
/// a `trigit.properties` declaring Java 1.8.
pub fn corpus(files: usize, units: usize, seed: u64) -> Vec<(String, String)> {
    let mut g = Gen::new(seed);
    let mut out = vec![("trigit.properties".to_string(), "java.version=1.8\n".to_string())];
    for i in 0..files {
        let pkg = format!("p{}", i % 10);
        let mut text = format!("package {pkg};\n\nimport java.util.List;\n\npublic class K{i} {{\n");
        text.push_str("    private int count;\n\n");
        text.push_str(&format!("    public void m0() {{\n        helper({});\n    }}\n\n", g.expr(2)));
        text.push_str("    public int m1() {\n        return count;\n    }\n");
        if i < units {
            let other = (i + 1) % files;
            if i % 2 == 0 {
                text.push_str(&format!(
                    "\n    void use() {{\n        if (trig{i}()) {{\n            m0();\n        }} else {{\n            m1();\n        }}\n    }}\n\n    @TrigItMethod\n    static boolean trig{i}() {{\n        return TrigIt.hasClass(\"K{other}\") && TrigIt.getClass(\"K{other}\").getMethod(\"m0\").isPublic();\n    }}\n"
                ));
            } else {
                text.push_str(&format!(
                    "\n    @TrigItMethod\n    static void act{i}() {{\n        if (TrigIt.getJavaVersion().greaterEqualThan(TrigIt.JAVA8) || !TrigIt.hasClass(\"K{other}\")) {{\n            TrigIt.getMethod(m1()).setProtected();\n        }}\n    }}\n"
                ));
            }
        }
        text.push_str("}\n");
        out.push((format!("src/{pkg}/K{i}.java"), text));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

const POSITIVE_WORDS: [&str; 10] = [
    "amber", "apex", "arrow", "aspen", "atlas", "azure", "acorn", "anvil", "attic", "avenue",
];
const NEGATIVE_WORDS: [&str; 10] = [
    "birch", "basil", "brook", "bison", "badge", "bench", "blade", "brick", "bucket", "bundle",
];
const SHARED_WORDS: [&str; 6] = ["is", "available", "remove", "code", "the", "path"];

/// `n` balanced examples whose only signal is the word vectors of one
/// content word per segment, plus the embedding file (`D` = 4) carrying it.
/// Both classes share token counts, tags and special classes.
pub fn separable_dataset(n: usize, seed: u64) -> (Vec<Example>, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut examples = Vec::with_capacity(n);
    for i in 0..n {
        let label = i % 2 == 0;
        let words = if label { &POSITIVE_WORDS } else { &NEGATIVE_WORDS };
        let (a, b) = (words.choose(&mut rng).unwrap(), words.choose(&mut rng).unwrap());
        examples.push(Example {
            trigger: format!("the {a} path is available"),
            action: format!("remove {b} code"),
            label,
        });
    }
    let mut emb = format!("{} 4\n", POSITIVE_WORDS.len() + NEGATIVE_WORDS.len() + SHARED_WORDS.len());
    let mut row = |w: &str, sign: f64, rng: &mut ChaCha8Rng| {
        let v: Vec<String> = std::iter::once(sign * rng.gen_range(0.5..1.5))
            .chain((0..3).map(|_| rng.gen_range(-0.3..0.3)))
            .map(|x: f64| format!("{x:.4}"))
            .collect();
        emb.push_str(&format!("{w} {}\n", v.join(" ")));
    };
    for w in POSITIVE_WORDS {
        row(w, 1.0, &mut rng);
    }
    for w in NEGATIVE_WORDS {
        row(w, -1.0, &mut rng);
    }
    for w in SHARED_WORDS {
        row(w, 0.0, &mut rng);
    }
    (examples, emb)
}
