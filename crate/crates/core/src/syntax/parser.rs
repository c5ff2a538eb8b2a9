//! Recursive-descent parser for the supported subset. Fail-fast: the first
//! construct outside the grammar aborts the file with a [`ParseError`].

use super::ast::*;
use super::lexer::{Token, TokenKind};
use crate::error::ParseError;

type PResult<T> = Result<T, ParseError>;

const PRIMITIVES: &[&str] = &[
    "boolean", "byte", "char", "short", "int", "long", "float", "double",
];

pub struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    file: &'a str,
}

/// Parses a whole compilation unit from a token stream produced by
/// [`tokenize`](super::lexer::tokenize).
pub fn parse_compilation_unit(tokens: &[Token], file: &str) -> PResult<CompilationUnit> {
    Parser::new(tokens, file).compilation_unit()
}

impl<'a> Parser<'a> {
    pub fn new(tokens: &'a [Token], file: &'a str) -> Self {
        Parser {
            tokens,
            pos: 0,
            file,
        }
    }

    fn peek_n(&self, n: usize) -> Option<&'a Token> {
        self.tokens
            .get(self.pos + n)
            .filter(|t| t.kind != TokenKind::Eof)
    }

    fn peek(&self) -> Option<&'a Token> {
        self.peek_n(0)
    }

    fn at_punct(&self, p: &str) -> bool {
        self.peek().is_some_and(|t| t.is_punct(p))
    }

    fn at_keyword(&self, k: &str) -> bool {
        self.peek().is_some_and(|t| t.is_keyword(k))
    }

    fn at_ident(&self) -> bool {
        self.peek().is_some_and(|t| t.kind == TokenKind::Identifier)
    }

    fn error(&self, expected: &str) -> ParseError {
        let (line, column, found) = match self.tokens.get(self.pos) {
            Some(t) if t.kind != TokenKind::Eof => {
                (t.span.start_line, t.span.start_col, t.to_string())
            }
            Some(t) => (t.span.start_line, t.span.start_col, "end of file".into()),
            None => self
                .tokens
                .last()
                .map_or((1, 1, "end of file".into()), |t| {
                    (t.span.end_line, t.span.end_col, "end of file".into())
                }),
        };
        ParseError {
            file: self.file.to_string(),
            line,
            column,
            expected: expected.to_string(),
            found,
        }
    }

    fn bump(&mut self) -> usize {
        let i = self.pos;
        self.pos += 1;
        i
    }

    fn expect_punct(&mut self, p: &str) -> PResult<usize> {
        if self.at_punct(p) {
            Ok(self.bump())
        } else {
            Err(self.error(&format!("`{p}`")))
        }
    }

    fn expect_keyword(&mut self, k: &str) -> PResult<usize> {
        if self.at_keyword(k) {
            Ok(self.bump())
        } else {
            Err(self.error(&format!("`{k}`")))
        }
    }

    fn ident(&mut self) -> PResult<Ident> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Identifier => {
                let tok = self.bump();
                Ok(Ident {
                    name: t.text.clone(),
                    tok,
                })
            }
            _ => Err(self.error("identifier")),
        }
    }

    fn qualified_name(&mut self) -> PResult<String> {
        let mut name = self.ident()?.name;
        while self.at_punct(".") && self.peek_n(1).is_some_and(|t| t.kind == TokenKind::Identifier)
        {
            self.bump();
            name.push('.');
            name.push_str(&self.ident()?.name);
        }
        Ok(name)
    }

    pub fn compilation_unit(&mut self) -> PResult<CompilationUnit> {
        let mut package = None;
        if self.at_keyword("package") {
            self.bump();
            package = Some(self.qualified_name()?);
            self.expect_punct(";")?;
        }
        let mut imports = Vec::new();
        while self.at_keyword("import") {
            let lo = self.bump();
            let is_static = self.at_keyword("static");
            if is_static {
                self.bump();
            }
            let name = self.qualified_name()?;
            let mut wildcard = false;
            if self.at_punct(".") && self.peek_n(1).is_some_and(|t| t.is_punct("*")) {
                self.bump();
                self.bump();
                wildcard = true;
            }
            self.expect_punct(";")?;
            imports.push(Import {
                name,
                is_static,
                wildcard,
                toks: TokRange::new(lo, self.pos),
            });
        }
        let mut classes = Vec::new();
        while self.peek().is_some() {
            classes.push(self.class_decl()?);
        }
        if classes.is_empty() {
            return Err(self.error("class declaration"));
        }
        Ok(CompilationUnit {
            package,
            imports,
            classes,
            toks: TokRange::new(0, self.tokens.len()),
        })
    }

    fn annotations(&mut self) -> PResult<Vec<Annotation>> {
        let mut out = Vec::new();
        while self
            .peek()
            .is_some_and(|t| t.kind == TokenKind::AnnotationMarker)
        {
            let lo = self.bump();
            let name = self.qualified_name()?;
            if self.at_punct("(") {
                self.balanced("(", ")")?;
            }
            out.push(Annotation {
                name,
                toks: TokRange::new(lo, self.pos),
            });
        }
        Ok(out)
    }

    /// Skips a balanced group starting at the current `open` token.
    fn balanced(&mut self, open: &str, close: &str) -> PResult<()> {
        self.expect_punct(open)?;
        let mut depth = 1usize;
        while depth > 0 {
            match self.peek() {
                None => return Err(self.error(&format!("`{close}`"))),
                Some(t) if t.is_punct(open) => depth += 1,
                Some(t) if t.is_punct(close) => depth -= 1,
                _ => {}
            }
            self.bump();
        }
        Ok(())
    }

    fn modifiers(&mut self) -> ModifierList {
        let lo = self.pos;
        let mut items = Vec::new();
        while let Some(t) = self.peek() {
            if t.kind != TokenKind::Keyword {
                break;
            }
            // `static {` opens a static block, not a modifier list
            if t.text == "static" && self.peek_n(1).is_some_and(|n| n.is_punct("{")) {
                break;
            }
            match Modifier::from_keyword(&t.text) {
                Some(m) => {
                    let i = self.bump();
                    items.push((m, i));
                }
                None => break,
            }
        }
        ModifierList {
            items,
            toks: TokRange::new(lo, self.pos),
        }
    }

    fn type_ref(&mut self) -> PResult<TypeRef> {
        let lo = self.pos;
        match self.peek() {
            Some(t) if t.kind == TokenKind::Keyword && PRIMITIVES.contains(&t.text.as_str()) => {
                self.bump();
            }
            Some(t) if t.kind == TokenKind::Identifier => {
                self.qualified_name()?;
                if self.at_punct("<") {
                    self.type_args()?;
                    // `Outer<T>.Inner` is outside the subset
                }
            }
            _ => return Err(self.error("type")),
        }
        while self.at_punct("[") {
            self.bump();
            self.expect_punct("]")?;
        }
        if self.at_punct("...") {
            self.bump();
        }
        let toks = TokRange::new(lo, self.pos);
        Ok(TypeRef {
            text: toks.text(self.tokens),
            toks,
        })
    }

    fn type_args(&mut self) -> PResult<()> {
        self.expect_punct("<")?;
        let mut depth = 1usize;
        while depth > 0 {
            match self.peek() {
                None => return Err(self.error("`>`")),
                Some(t) if t.is_punct("<") => depth += 1,
                Some(t) if t.is_punct(">") => depth -= 1,
                Some(t)
                    if t.kind == TokenKind::Identifier
                        || t.is_punct(",")
                        || t.is_punct(".")
                        || t.is_punct("?")
                        || t.is_punct("[")
                        || t.is_punct("]")
                        || t.is_punct("&")
                        || t.is_keyword("extends")
                        || t.is_keyword("super")
                        || (t.kind == TokenKind::Keyword
                            && PRIMITIVES.contains(&t.text.as_str())) => {}
                Some(_) => return Err(self.error("type argument")),
            }
            self.bump();
        }
        Ok(())
    }

    fn class_decl(&mut self) -> PResult<ClassDecl> {
        let lo = self.pos;
        let annotations = self.annotations()?;
        let modifiers = self.modifiers();
        self.class_rest(lo, annotations, modifiers)
    }

    fn class_rest(
        &mut self,
        lo: usize,
        annotations: Vec<Annotation>,
        modifiers: ModifierList,
    ) -> PResult<ClassDecl> {
        self.expect_keyword("class")?;
        let name = self.ident()?;
        if self.at_punct("<") {
            self.type_args()?;
        }
        let mut extends = None;
        if self.at_keyword("extends") {
            self.bump();
            extends = Some(self.type_ref()?);
        }
        let mut implements = Vec::new();
        if self.at_keyword("implements") {
            self.bump();
            implements.push(self.type_ref()?);
            while self.at_punct(",") {
                self.bump();
                implements.push(self.type_ref()?);
            }
        }
        let open_brace = self.expect_punct("{")?;
        let mut members = Vec::new();
        while !self.at_punct("}") {
            if self.peek().is_none() {
                return Err(self.error("`}`"));
            }
            members.push(self.member(&name.name)?);
        }
        let close_brace = self.bump();
        Ok(ClassDecl {
            annotations,
            modifiers,
            name,
            extends,
            implements,
            members,
            open_brace,
            close_brace,
            toks: TokRange::new(lo, self.pos),
        })
    }

    fn member(&mut self, class_name: &str) -> PResult<Member> {
        let lo = self.pos;
        if self.at_keyword("static") && self.peek_n(1).is_some_and(|t| t.is_punct("{")) {
            self.bump();
            let body = self.block()?;
            return Ok(Member::StaticBlock(StaticBlock {
                body,
                toks: TokRange::new(lo, self.pos),
            }));
        }
        let annotations = self.annotations()?;
        let modifiers = self.modifiers();
        if self.at_keyword("class") {
            return Ok(Member::Class(self.class_rest(lo, annotations, modifiers)?));
        }
        let ret = if self.at_keyword("void") {
            ReturnType::Void(self.bump())
        } else if self.peek().is_some_and(|t| t.text == class_name)
            && self.peek_n(1).is_some_and(|t| t.is_punct("("))
        {
            ReturnType::Constructor
        } else {
            ReturnType::Type(self.type_ref()?)
        };
        let name = self.ident()?;
        if self.at_punct("(") {
            return self
                .method_rest(lo, annotations, modifiers, ret, name)
                .map(Member::Method);
        }
        let ty = match ret {
            ReturnType::Type(t) => t,
            _ => return Err(self.error("`(`")),
        };
        let mut init = None;
        if self.at_punct("=") {
            self.bump();
            init = Some(self.expr()?);
        }
        self.expect_punct(";")?;
        Ok(Member::Field(FieldDecl {
            annotations,
            modifiers,
            ty,
            name,
            init,
            toks: TokRange::new(lo, self.pos),
        }))
    }

    fn method_rest(
        &mut self,
        lo: usize,
        annotations: Vec<Annotation>,
        modifiers: ModifierList,
        ret: ReturnType,
        name: Ident,
    ) -> PResult<MethodDecl> {
        self.expect_punct("(")?;
        let mut params = Vec::new();
        if !self.at_punct(")") {
            loop {
                let plo = self.pos;
                let ty = self.type_ref()?;
                let pname = self.ident()?;
                params.push(Param {
                    ty,
                    name: pname,
                    toks: TokRange::new(plo, self.pos),
                });
                if !self.at_punct(",") {
                    break;
                }
                self.bump();
            }
        }
        self.expect_punct(")")?;
        let mut throws = Vec::new();
        if self.at_keyword("throws") {
            self.bump();
            throws.push(self.type_ref()?);
            while self.at_punct(",") {
                self.bump();
                throws.push(self.type_ref()?);
            }
        }
        let body = if self.at_punct(";") {
            self.bump();
            None
        } else {
            Some(self.block()?)
        };
        Ok(MethodDecl {
            annotations,
            modifiers,
            ret,
            name,
            params,
            throws,
            body,
            toks: TokRange::new(lo, self.pos),
        })
    }

    fn block(&mut self) -> PResult<Block> {
        let lo = self.expect_punct("{")?;
        let mut stmts = Vec::new();
        while !self.at_punct("}") {
            if self.peek().is_none() {
                return Err(self.error("`}`"));
            }
            stmts.push(self.stmt()?);
        }
        self.bump();
        Ok(Block {
            stmts,
            toks: TokRange::new(lo, self.pos),
        })
    }

    pub fn stmt(&mut self) -> PResult<Stmt> {
        let lo = self.pos;
        let kind = if self.at_punct("{") {
            StmtKind::Block(self.block()?)
        } else if self.at_keyword("if") {
            self.bump();
            self.expect_punct("(")?;
            let cond = self.expr()?;
            self.expect_punct(")")?;
            let then = Box::new(self.stmt()?);
            let otherwise = if self.at_keyword("else") {
                self.bump();
                Some(Box::new(self.stmt()?))
            } else {
                None
            };
            StmtKind::If {
                cond,
                then,
                otherwise,
            }
        } else if self.at_keyword("return") {
            self.bump();
            let value = if self.at_punct(";") {
                None
            } else {
                Some(self.expr()?)
            };
            self.expect_punct(";")?;
            StmtKind::Return(value)
        } else if let Some((ty, name)) = self.try_local_head() {
            let init = if self.at_punct("=") {
                self.bump();
                Some(self.expr()?)
            } else {
                None
            };
            self.expect_punct(";")?;
            StmtKind::LocalVar { ty, name, init }
        } else {
            let target = self.expr()?;
            let kind = if self.at_punct("=") {
                match target.kind {
                    ExprKind::Name(_) | ExprKind::Field { .. } => {}
                    _ => return Err(self.error("`;`")),
                }
                self.bump();
                let value = self.expr()?;
                StmtKind::Assign { target, value }
            } else {
                StmtKind::Expr(target)
            };
            self.expect_punct(";")?;
            kind
        };
        Ok(Stmt {
            kind,
            toks: TokRange::new(lo, self.pos),
        })
    }

    /// Speculatively parses `Type Ident` followed by `=` or `;`.
    fn try_local_head(&mut self) -> Option<(TypeRef, Ident)> {
        let save = self.pos;
        let head = (|| {
            let ty = self.type_ref().ok()?;
            let name = self.ident().ok()?;
            (self.at_punct("=") || self.at_punct(";")).then_some((ty, name))
        })();
        if head.is_none() {
            self.pos = save;
        }
        head
    }

    pub fn expr(&mut self) -> PResult<Expr> {
        if self.at_ident() && self.peek_n(1).is_some_and(|t| t.is_punct("->")) {
            let lo = self.pos;
            let param = self.ident()?.name;
            self.bump();
            let body = self.expr()?;
            return Ok(Expr {
                kind: ExprKind::Lambda {
                    param,
                    body: Box::new(body),
                },
                toks: TokRange::new(lo, self.pos),
            });
        }
        self.binary(0)
    }

    fn binary(&mut self, level: usize) -> PResult<Expr> {
        const LEVELS: &[&[(&str, BinaryOp)]] = &[
            &[("||", BinaryOp::Or)],
            &[("&&", BinaryOp::And)],
            &[("==", BinaryOp::Eq), ("!=", BinaryOp::Ne)],
            &[
                ("<=", BinaryOp::Le),
                (">=", BinaryOp::Ge),
                ("<", BinaryOp::Lt),
                (">", BinaryOp::Gt),
            ],
            &[("+", BinaryOp::Add), ("-", BinaryOp::Sub)],
            &[
                ("*", BinaryOp::Mul),
                ("/", BinaryOp::Div),
                ("%", BinaryOp::Rem),
            ],
        ];
        if level == LEVELS.len() {
            return self.unary();
        }
        let lo = self.pos;
        let mut lhs = self.binary(level + 1)?;
        loop {
            let op = LEVELS[level]
                .iter()
                .find(|(p, _)| self.at_punct(p))
                .map(|(_, op)| *op);
            let Some(op) = op else { break };
            self.bump();
            let rhs = self.binary(level + 1)?;
            lhs = Expr {
                kind: ExprKind::Binary {
                    op,
                    lhs: Box::new(lhs),
                    rhs: Box::new(rhs),
                },
                toks: TokRange::new(lo, self.pos),
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        let lo = self.pos;
        let op = if self.at_punct("!") {
            UnaryOp::Not
        } else if self.at_punct("-") {
            UnaryOp::Neg
        } else {
            return self.postfix();
        };
        self.bump();
        let operand = self.unary()?;
        Ok(Expr {
            kind: ExprKind::Unary {
                op,
                operand: Box::new(operand),
            },
            toks: TokRange::new(lo, self.pos),
        })
    }

    fn postfix(&mut self) -> PResult<Expr> {
        let lo = self.pos;
        let mut e = self.primary()?;
        while self.at_punct(".") {
            self.bump();
            let name = self.ident()?.name;
            e = if self.at_punct("(") {
                let args = self.call_args()?;
                Expr {
                    kind: ExprKind::Call {
                        target: Some(Box::new(e)),
                        name,
                        args,
                    },
                    toks: TokRange::new(lo, self.pos),
                }
            } else {
                Expr {
                    kind: ExprKind::Field {
                        target: Box::new(e),
                        name,
                    },
                    toks: TokRange::new(lo, self.pos),
                }
            };
        }
        Ok(e)
    }

    fn call_args(&mut self) -> PResult<Vec<Expr>> {
        self.expect_punct("(")?;
        let mut args = Vec::new();
        if !self.at_punct(")") {
            loop {
                args.push(self.expr()?);
                if !self.at_punct(",") {
                    break;
                }
                self.bump();
            }
        }
        self.expect_punct(")")?;
        Ok(args)
    }

    fn primary(&mut self) -> PResult<Expr> {
        let lo = self.pos;
        let Some(t) = self.peek() else {
            return Err(self.error("expression"));
        };
        let kind = match t.kind {
            TokenKind::StringLiteral => {
                self.bump();
                ExprKind::Literal(Literal {
                    kind: LitKind::String,
                    raw: t.text.clone(),
                    value: t.string_value().unwrap_or_default(),
                    substituted: false,
                })
            }
            TokenKind::NumberLiteral => {
                self.bump();
                ExprKind::Literal(Literal {
                    kind: LitKind::Number,
                    raw: t.text.clone(),
                    value: t.text.clone(),
                    substituted: false,
                })
            }
            TokenKind::Keyword if t.text == "true" || t.text == "false" || t.text == "null" => {
                self.bump();
                ExprKind::Literal(Literal {
                    kind: if t.text == "null" {
                        LitKind::Null
                    } else {
                        LitKind::Bool
                    },
                    raw: t.text.clone(),
                    value: t.text.clone(),
                    substituted: false,
                })
            }
            TokenKind::Keyword if t.text == "this" || t.text == "super" => {
                let word = t.text.clone();
                self.bump();
                if self.at_punct("(") {
                    // Explicit constructor invocation.
                    ExprKind::Call {
                        target: None,
                        name: word,
                        args: self.call_args()?,
                    }
                } else if word == "this" {
                    ExprKind::This
                } else {
                    ExprKind::Name(word)
                }
            }
            TokenKind::Identifier => {
                let name = self.ident()?.name;
                if self.at_punct("(") {
                    let args = self.call_args()?;
                    ExprKind::Call {
                        target: None,
                        name,
                        args,
                    }
                } else {
                    ExprKind::Name(name)
                }
            }
            TokenKind::Punctuation if t.text == "(" => {
                self.bump();
                let inner = self.expr()?;
                self.expect_punct(")")?;
                ExprKind::Paren(Box::new(inner))
            }
            _ => return Err(self.error("expression")),
        };
        Ok(Expr {
            kind,
            toks: TokRange::new(lo, self.pos),
        })
    }

    pub fn at_end(&self) -> bool {
        self.peek().is_none()
    }
}

/// Parses a standalone expression; used by tests and tooling.
pub fn parse_expr(tokens: &[Token], file: &str) -> PResult<Expr> {
    let mut p = Parser::new(tokens, file);
    let e = p.expr()?;
    if !p.at_end() {
        return Err(p.error("end of expression"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::lexer::tokenize;

    fn parse(src: &str) -> CompilationUnit {
        let toks = tokenize(src, "t.java").unwrap();
        parse_compilation_unit(&toks, "t.java").unwrap()
    }

    fn parse_err(src: &str) -> ParseError {
        let toks = tokenize(src, "t.java").unwrap();
        parse_compilation_unit(&toks, "t.java").unwrap_err()
    }

    #[test]
    fn minimal_class() {
        let u = parse("class A {}");
        assert_eq!(u.classes.len(), 1);
        assert_eq!(u.classes[0].name.name, "A");
        assert!(u.classes[0].members.is_empty());
    }

    #[test]
    fn trigit_method_annotation() {
        let u = parse(
            "class Mapper {\n  public final String simpleName() { return simpleName; }\n  \
             @TrigItMethod public static void checkMerge() {\n    \
             if (!TrigIt.hasClass(\"Mapper\") || !TrigIt.hasClass(\"FieldMapper\")) {\n      \
             TrigIt.getMethod(simpleName()).setProtected();\n    }\n  }\n}\n",
        );
        let methods: Vec<_> = u.classes[0].methods().collect();
        assert_eq!(methods.len(), 2);
        assert!(!methods[0].has_annotation("TrigItMethod"));
        assert!(methods[1].has_annotation("TrigItMethod"));
        assert!(methods[0].modifiers.has(Modifier::Final));
    }

    #[test]
    fn constructor_invocations() {
        let u = parse(
            "class B extends A { B(int x) { super(x); } B() { this(1); super.m(); } }",
        );
        assert_eq!(u.classes[0].members.len(), 2);
    }

    #[test]
    fn guard_condition_is_single_call() {
        let u = parse(
            "class T { void t() { if (trigItJava6()) x = \"a\"; } }",
        );
        let m = u.classes[0].methods().next().unwrap();
        let stmt = &m.body.as_ref().unwrap().stmts[0];
        match &stmt.kind {
            StmtKind::If { cond, .. } => assert!(cond.is_bare_call("trigItJava6")),
            other => panic!("expected if, got {other:?}"),
        }
    }

    #[test]
    fn header_package_imports_and_generics() {
        let u = parse(
            "package a.b;\nimport java.util.List;\nimport static org.junit.Assert.*;\n\
             public class C extends Base<String> implements I, J {\n  \
             private List<Map<String, int[]>> xs;\n  \
             static { init(); }\n  \
             C(int a) throws IOException, E { }\n  \
             abstract int size();\n  \
             class Inner { }\n}",
        );
        assert_eq!(u.package.as_deref(), Some("a.b"));
        assert_eq!(u.imports.len(), 2);
        assert!(u.imports[1].is_static && u.imports[1].wildcard);
        let c = &u.classes[0];
        assert_eq!(c.implements.len(), 2);
        assert_eq!(c.members.len(), 5);
        match &c.members[0] {
            Member::Field(f) => assert_eq!(f.ty.text, "List<Map<String, int[]>>"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(c.members[1], Member::StaticBlock(_)));
        match &c.members[2] {
            Member::Method(m) => {
                assert!(m.is_constructor());
                assert_eq!(m.throws.len(), 2);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(&c.members[3], Member::Method(m) if m.body.is_none()));
        assert!(matches!(c.members[4], Member::Class(_)));
    }

    #[test]
    fn out_of_subset_is_error() {
        let e = parse_err("class A { void f() { while (x) { } } }");
        assert_eq!((e.line, e.column), (1, 22));
        assert!(parse_err("class A { int a, b; }").expected.contains(';'));
        parse_err("");
        parse_err("interface I {}");
        parse_err("class A { void f() { x = new B(); } }");
    }

    #[test]
    fn child_spans_nest_in_parents() {
        let u = parse("class A { boolean t() { return a.b(c, d) && !e; } }");
        let c = &u.classes[0];
        assert!(u.toks.contains(&c.toks));
        for m in &c.members {
            assert!(c.toks.contains(&m.toks()));
        }
        let m = c.methods().next().unwrap();
        let body = m.body.as_ref().unwrap();
        assert!(m.toks.contains(&body.toks));
        if let StmtKind::Return(Some(e)) = &body.stmts[0].kind {
            assert!(body.stmts[0].toks.contains(&e.toks));
            e.visit(&mut |inner| assert!(e.toks.contains(&inner.toks)));
        } else {
            panic!()
        }
    }

    #[test]
    fn lambdas_and_arithmetic() {
        let toks = tokenize("c -> c.getName().equals(\"A\") && n % 2 == 0", "e").unwrap();
        let e = parse_expr(&toks, "e").unwrap();
        assert!(matches!(e.kind, ExprKind::Lambda { .. }));
    }
}
