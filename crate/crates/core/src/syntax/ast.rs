//! Concrete syntax tree for the Java-like subset.
//!
//! Nodes record the half-open range of token indices they cover rather than
//! copying text; spans and source slices are recovered through the token
//! stream the tree was parsed from.

use serde::Serialize;

use super::lexer::{Span, Token};

/// Half-open range of token indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
pub struct TokRange {
    pub lo: usize,
    pub hi: usize,
}

impl TokRange {
    pub fn new(lo: usize, hi: usize) -> Self {
        TokRange { lo, hi }
    }

    pub fn is_empty(&self) -> bool {
        self.lo >= self.hi
    }

    pub fn contains(&self, other: &TokRange) -> bool {
        other.is_empty() || (self.lo <= other.lo && other.hi <= self.hi)
    }

    pub fn span(&self, tokens: &[Token]) -> Span {
        if self.is_empty() {
            let at = tokens
                .get(self.lo)
                .map_or_else(Span::default, |t| t.span);
            return Span {
                end: at.start,
                end_line: at.start_line,
                end_col: at.start_col,
                ..at
            };
        }
        tokens[self.lo].span.to(&tokens[self.hi - 1].span)
    }

    /// Token texts with the trivia between them, without the first token's
    /// leading trivia.
    pub fn text(&self, tokens: &[Token]) -> String {
        let mut out = String::new();
        for (i, tok) in tokens[self.lo..self.hi].iter().enumerate() {
            if i > 0 {
                for t in &tok.leading {
                    out.push_str(&t.text);
                }
            }
            out.push_str(&tok.text);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ident {
    pub name: String,
    pub tok: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompilationUnit {
    pub package: Option<String>,
    pub imports: Vec<Import>,
    pub classes: Vec<ClassDecl>,
    pub toks: TokRange,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Import {
    pub name: String,
    pub is_static: bool,
    pub wildcard: bool,
    pub toks: TokRange,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Annotation {
    pub name: String,
    pub toks: TokRange,
}

impl Annotation {
    pub fn simple_name(&self) -> &str {
        self.name.rsplit('.').next().unwrap_or(&self.name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Modifier {
    Public,
    Protected,
    Private,
    Static,
    Final,
    Abstract,
}

impl Modifier {
    pub fn from_keyword(word: &str) -> Option<Modifier> {
        Some(match word {
            "public" => Modifier::Public,
            "protected" => Modifier::Protected,
            "private" => Modifier::Private,
            "static" => Modifier::Static,
            "final" => Modifier::Final,
            "abstract" => Modifier::Abstract,
            _ => return None,
        })
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Modifier::Public => "public",
            Modifier::Protected => "protected",
            Modifier::Private => "private",
            Modifier::Static => "static",
            Modifier::Final => "final",
            Modifier::Abstract => "abstract",
        }
    }

    pub fn is_visibility(self) -> bool {
        matches!(
            self,
            Modifier::Public | Modifier::Protected | Modifier::Private
        )
    }
}

/// Modifier keywords in source order. `toks` is empty (positioned at the
/// following token) when there are none.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModifierList {
    pub items: Vec<(Modifier, usize)>,
    pub toks: TokRange,
}

impl ModifierList {
    pub fn has(&self, m: Modifier) -> bool {
        self.items.iter().any(|(x, _)| *x == m)
    }
}

/// Type as written; generic arguments and array brackets are not interpreted.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TypeRef {
    pub text: String,
    pub toks: TokRange,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassDecl {
    pub annotations: Vec<Annotation>,
    pub modifiers: ModifierList,
    pub name: Ident,
    pub extends: Option<TypeRef>,
    pub implements: Vec<TypeRef>,
    pub members: Vec<Member>,
    pub open_brace: usize,
    pub close_brace: usize,
    pub toks: TokRange,
}

impl ClassDecl {
    pub fn methods(&self) -> impl Iterator<Item = &MethodDecl> {
        self.members.iter().filter_map(|m| match m {
            Member::Method(m) => Some(m),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Member {
    Field(FieldDecl),
    Method(MethodDecl),
    StaticBlock(StaticBlock),
    Class(ClassDecl),
}

impl Member {
    pub fn toks(&self) -> TokRange {
        match self {
            Member::Field(f) => f.toks,
            Member::Method(m) => m.toks,
            Member::StaticBlock(s) => s.toks,
            Member::Class(c) => c.toks,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldDecl {
    pub annotations: Vec<Annotation>,
    pub modifiers: ModifierList,
    pub ty: TypeRef,
    pub name: Ident,
    pub init: Option<Expr>,
    pub toks: TokRange,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ReturnType {
    Void(usize),
    Type(TypeRef),
    /// Constructors have no declared return type.
    Constructor,
}

impl ReturnType {
    pub fn text(&self) -> &str {
        match self {
            ReturnType::Void(_) => "void",
            ReturnType::Type(t) => &t.text,
            ReturnType::Constructor => "",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodDecl {
    pub annotations: Vec<Annotation>,
    pub modifiers: ModifierList,
    pub ret: ReturnType,
    pub name: Ident,
    pub params: Vec<Param>,
    pub throws: Vec<TypeRef>,
    pub body: Option<Block>,
    pub toks: TokRange,
}

impl MethodDecl {
    pub fn has_annotation(&self, name: &str) -> bool {
        self.annotations.iter().any(|a| a.simple_name() == name)
    }

    pub fn is_constructor(&self) -> bool {
        matches!(self.ret, ReturnType::Constructor)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Param {
    pub ty: TypeRef,
    pub name: Ident,
    pub toks: TokRange,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StaticBlock {
    pub body: Block,
    pub toks: TokRange,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Block {
    pub stmts: Vec<Stmt>,
    pub toks: TokRange,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stmt {
    pub kind: StmtKind,
    pub toks: TokRange,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum StmtKind {
    Block(Block),
    If {
        cond: Expr,
        then: Box<Stmt>,
        otherwise: Option<Box<Stmt>>,
    },
    Return(Option<Expr>),
    LocalVar {
        ty: TypeRef,
        name: Ident,
        init: Option<Expr>,
    },
    Expr(Expr),
    Assign {
        target: Expr,
        value: Expr,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Expr {
    pub kind: ExprKind,
    pub toks: TokRange,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum UnaryOp {
    Not,
    Neg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BinaryOp {
    Or,
    And,
    Eq,
    Ne,
    Lt,
    Gt,
    Le,
    Ge,
    Add,
    Sub,
    Mul,
    Div,
    Rem,
}

impl BinaryOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinaryOp::Or => "||",
            BinaryOp::And => "&&",
            BinaryOp::Eq => "==",
            BinaryOp::Ne => "!=",
            BinaryOp::Lt => "<",
            BinaryOp::Gt => ">",
            BinaryOp::Le => "<=",
            BinaryOp::Ge => ">=",
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Rem => "%",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LitKind {
    String,
    Number,
    Bool,
    Null,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Literal {
    pub kind: LitKind,
    /// Source text, escapes unprocessed.
    pub raw: String,
    /// Decoded value for strings; same as `raw` otherwise.
    pub value: String,
    /// True when produced by name substitution rather than written in source.
    pub substituted: bool,
}

impl Literal {
    pub fn string(value: &str, substituted: bool) -> Literal {
        let mut raw = String::with_capacity(value.len() + 2);
        raw.push('"');
        for c in value.chars() {
            match c {
                '"' => raw.push_str("\\\""),
                '\\' => raw.push_str("\\\\"),
                '\n' => raw.push_str("\\n"),
                _ => raw.push(c),
            }
        }
        raw.push('"');
        Literal {
            kind: LitKind::String,
            raw,
            value: value.to_string(),
            substituted,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ExprKind {
    Literal(Literal),
    Name(String),
    This,
    Paren(Box<Expr>),
    /// `target.name(args)`, or `name(args)` when `target` is absent.
    Call {
        target: Option<Box<Expr>>,
        name: String,
        args: Vec<Expr>,
    },
    Field {
        target: Box<Expr>,
        name: String,
    },
    Unary {
        op: UnaryOp,
        operand: Box<Expr>,
    },
    Binary {
        op: BinaryOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    Lambda {
        param: String,
        body: Box<Expr>,
    },
}

impl Expr {
    /// Strips redundant parentheses.
    pub fn unparen(&self) -> &Expr {
        match &self.kind {
            ExprKind::Paren(inner) => inner.unparen(),
            _ => self,
        }
    }

    /// Root of a member chain: `a` for `a.b().c`.
    pub fn chain_root(&self) -> &Expr {
        match &self.kind {
            ExprKind::Call {
                target: Some(t), ..
            }
            | ExprKind::Field { target: t, .. } => t.chain_root(),
            _ => self,
        }
    }

    pub fn is_bare_call(&self, name: &str) -> bool {
        matches!(&self.kind, ExprKind::Call { target: None, name: n, args } if n == name && args.is_empty())
    }

    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Expr)) {
        f(self);
        match &self.kind {
            ExprKind::Literal(_) | ExprKind::Name(_) | ExprKind::This => {}
            ExprKind::Paren(e) => e.visit(f),
            ExprKind::Call { target, args, .. } => {
                if let Some(t) = target {
                    t.visit(f);
                }
                for a in args {
                    a.visit(f);
                }
            }
            ExprKind::Field { target, .. } => target.visit(f),
            ExprKind::Unary { operand, .. } => operand.visit(f),
            ExprKind::Binary { lhs, rhs, .. } => {
                lhs.visit(f);
                rhs.visit(f);
            }
            ExprKind::Lambda { body, .. } => body.visit(f),
        }
    }
}

impl Stmt {
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Stmt)) {
        f(self);
        match &self.kind {
            StmtKind::Block(b) => b.stmts.iter().for_each(|s| s.visit(f)),
            StmtKind::If {
                then, otherwise, ..
            } => {
                then.visit(f);
                if let Some(o) = otherwise {
                    o.visit(f);
                }
            }
            _ => {}
        }
    }
}

/// Depth-first walk over classes, including nested ones.
pub fn walk_classes<'a>(classes: &'a [ClassDecl], f: &mut impl FnMut(&'a ClassDecl, usize)) {
    fn go<'a>(c: &'a ClassDecl, depth: usize, f: &mut impl FnMut(&'a ClassDecl, usize)) {
        f(c, depth);
        for m in &c.members {
            if let Member::Class(inner) = m {
                go(inner, depth + 1, f);
            }
        }
    }
    for c in classes {
        go(c, 0, f);
    }
}
