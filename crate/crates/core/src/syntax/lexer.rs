//! Lossless lexer for the Java-like subset.
//!
//! Every byte of the input ends up either in a token's `text` or in the
//! `leading` trivia of some token, so concatenating the stream reproduces the
//! source exactly. Trivia that follows the last real token is attached to an
//! [`TokenKind::Eof`] sentinel, which is only emitted when such trivia exists.

use std::fmt;

use serde::Serialize;

use crate::error::LexError;

/// A source region. Byte offsets are half-open; lines and columns are
/// 1-based, columns count characters, and the end position is exclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub start_line: u32,
    pub start_col: u32,
    pub end_line: u32,
    pub end_col: u32,
}

impl Span {
    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    /// Smallest span covering both.
    pub fn to(&self, other: &Span) -> Span {
        let (first, last) = if self.start <= other.start {
            (self, other)
        } else {
            (other, self)
        };
        Span {
            start: first.start,
            end: last.end.max(first.end),
            start_line: first.start_line,
            start_col: first.start_col,
            end_line: last.end_line,
            end_col: last.end_col,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TokenKind {
    Keyword,
    Identifier,
    StringLiteral,
    NumberLiteral,
    Punctuation,
    AnnotationMarker,
    Eof,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TriviaKind {
    Whitespace,
    LineComment,
    BlockComment,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Trivia {
    pub kind: TriviaKind,
    pub text: String,
    pub span: Span,
}

impl Trivia {
    pub fn is_comment(&self) -> bool {
        !matches!(self.kind, TriviaKind::Whitespace)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub span: Span,
    pub leading: Vec<Trivia>,
}

impl Token {
    pub fn is(&self, kind: TokenKind, text: &str) -> bool {
        self.kind == kind && self.text == text
    }

    pub fn is_punct(&self, text: &str) -> bool {
        self.is(TokenKind::Punctuation, text)
    }

    pub fn is_keyword(&self, text: &str) -> bool {
        self.is(TokenKind::Keyword, text)
    }

    /// Byte offset where this token's leading trivia begins.
    pub fn trivia_start(&self) -> usize {
        self.leading.first().map_or(self.span.start, |t| t.span.start)
    }

    /// Decoded value of a string or char literal; `None` for other kinds.
    pub fn string_value(&self) -> Option<String> {
        if self.kind != TokenKind::StringLiteral || self.text.len() < 2 {
            return None;
        }
        Some(unescape(&self.text[1..self.text.len() - 1]))
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kind == TokenKind::Eof {
            f.write_str("end of file")
        } else {
            write!(f, "`{}`", self.text)
        }
    }
}

pub const KEYWORDS: &[&str] = &[
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const",
    "continue", "default", "do", "double", "else", "enum", "extends", "false", "final", "finally",
    "float", "for", "goto", "if", "implements", "import", "instanceof", "int", "interface", "long",
    "native", "new", "null", "package", "private", "protected", "public", "return", "short",
    "static", "strictfp", "super", "switch", "synchronized", "this", "throw", "throws",
    "transient", "true", "try", "void", "volatile", "while",
];

pub fn is_keyword(word: &str) -> bool {
    KEYWORDS.contains(&word)
}

const MULTI_PUNCT: &[&str] = &[
    "...", "->", "::", "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=", "-=", "*=", "/=",
    "%=", "&=", "|=", "^=",
];
const SINGLE_PUNCT: &str = "{}()[];,.=!<>+-*/%?:&|^~";

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.src[self.pos..].chars().nth(n)
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn mark(&self) -> (usize, u32, u32) {
        (self.pos, self.line, self.col)
    }

    fn span_from(&self, mark: (usize, u32, u32)) -> Span {
        Span {
            start: mark.0,
            end: self.pos,
            start_line: mark.1,
            start_col: mark.2,
            end_line: self.line,
            end_col: self.col,
        }
    }
}

/// Splits `source` into tokens with attached comment and whitespace trivia.
pub fn tokenize(source: &str, file: &str) -> Result<Vec<Token>, LexError> {
    let mut cur = Cursor {
        src: source,
        pos: 0,
        line: 1,
        col: 1,
    };
    let mut tokens = Vec::new();
    let mut trivia = Vec::new();
    let err = |cur: &Cursor, line: u32, col: u32, message: &str| LexError {
        file: file.to_string(),
        line,
        column: col,
        message: message.to_string(),
        offset: cur.pos,
    };

    while let Some(c) = cur.peek() {
        let mark = cur.mark();
        if c.is_whitespace() {
            while cur.peek().is_some_and(char::is_whitespace) {
                cur.bump();
            }
            trivia.push(Trivia {
                kind: TriviaKind::Whitespace,
                text: source[mark.0..cur.pos].to_string(),
                span: cur.span_from(mark),
            });
            continue;
        }
        if cur.rest().starts_with("//") {
            while cur.peek().is_some_and(|c| c != '\n') {
                cur.bump();
            }
            trivia.push(Trivia {
                kind: TriviaKind::LineComment,
                text: source[mark.0..cur.pos].to_string(),
                span: cur.span_from(mark),
            });
            continue;
        }
        if cur.rest().starts_with("/*") {
            cur.bump();
            cur.bump();
            loop {
                if cur.rest().starts_with("*/") {
                    cur.bump();
                    cur.bump();
                    break;
                }
                if cur.bump().is_none() {
                    return Err(err(&cur, mark.1, mark.2, "unterminated block comment"));
                }
            }
            trivia.push(Trivia {
                kind: TriviaKind::BlockComment,
                text: source[mark.0..cur.pos].to_string(),
                span: cur.span_from(mark),
            });
            continue;
        }

        let kind = if c == '"' || c == '\'' {
            cur.bump();
            loop {
                match cur.bump() {
                    None | Some('\n') => {
                        return Err(err(&cur, mark.1, mark.2, "unterminated literal"));
                    }
                    Some('\\') => {
                        if cur.bump().is_none() {
                            return Err(err(&cur, mark.1, mark.2, "unterminated literal"));
                        }
                    }
                    Some(q) if q == c => break,
                    Some(_) => {}
                }
            }
            TokenKind::StringLiteral
        } else if c.is_ascii_digit() {
            lex_number(&mut cur);
            TokenKind::NumberLiteral
        } else if c.is_alphabetic() || c == '_' || c == '$' {
            while cur
                .peek()
                .is_some_and(|c| c.is_alphanumeric() || c == '_' || c == '$')
            {
                cur.bump();
            }
            if is_keyword(&source[mark.0..cur.pos]) {
                TokenKind::Keyword
            } else {
                TokenKind::Identifier
            }
        } else if c == '@' {
            cur.bump();
            TokenKind::AnnotationMarker
        } else if let Some(p) = MULTI_PUNCT.iter().find(|p| cur.rest().starts_with(**p)) {
            for _ in 0..p.len() {
                cur.bump();
            }
            TokenKind::Punctuation
        } else if SINGLE_PUNCT.contains(c) {
            cur.bump();
            TokenKind::Punctuation
        } else {
            return Err(err(
                &cur,
                mark.1,
                mark.2,
                &format!("illegal character {c:?}"),
            ));
        };
        tokens.push(Token {
            kind,
            text: source[mark.0..cur.pos].to_string(),
            span: cur.span_from(mark),
            leading: std::mem::take(&mut trivia),
        });
    }

    if !trivia.is_empty() {
        let mark = cur.mark();
        tokens.push(Token {
            kind: TokenKind::Eof,
            text: String::new(),
            span: cur.span_from(mark),
            leading: trivia,
        });
    }
    Ok(tokens)
}

fn lex_number(cur: &mut Cursor) {
    if cur.rest().starts_with("0x") || cur.rest().starts_with("0X") {
        cur.bump();
        cur.bump();
        while cur.peek().is_some_and(|c| c.is_ascii_hexdigit() || c == '_') {
            cur.bump();
        }
    } else {
        while cur.peek().is_some_and(|c| c.is_ascii_digit() || c == '_') {
            cur.bump();
        }
        if cur.peek() == Some('.') && cur.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            cur.bump();
            while cur.peek().is_some_and(|c| c.is_ascii_digit() || c == '_') {
                cur.bump();
            }
        }
        if matches!(cur.peek(), Some('e' | 'E')) {
            let sign = matches!(cur.peek_at(1), Some('+' | '-'));
            let digit_at = if sign { 2 } else { 1 };
            if cur.peek_at(digit_at).is_some_and(|c| c.is_ascii_digit()) {
                for _ in 0..digit_at {
                    cur.bump();
                }
                while cur.peek().is_some_and(|c| c.is_ascii_digit()) {
                    cur.bump();
                }
            }
        }
    }
    if matches!(cur.peek(), Some('l' | 'L' | 'f' | 'F' | 'd' | 'D')) {
        cur.bump();
    }
}

/// Decodes Java escape sequences. Unknown escapes are kept verbatim.
pub fn unescape(body: &str) -> String {
    let mut out = String::with_capacity(body.len());
    let mut chars = body.chars().peekable();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('n') => out.push('\n'),
            Some('t') => out.push('\t'),
            Some('r') => out.push('\r'),
            Some('b') => out.push('\u{8}'),
            Some('f') => out.push('\u{c}'),
            Some('0') => out.push('\0'),
            Some('u') => {
                let hex: String = std::iter::from_fn(|| chars.next_if(|c| c.is_ascii_hexdigit()))
                    .take(4)
                    .collect();
                match u32::from_str_radix(&hex, 16).ok().and_then(char::from_u32) {
                    Some(ch) if hex.len() == 4 => out.push(ch),
                    _ => {
                        out.push_str("\\u");
                        out.push_str(&hex);
                    }
                }
            }
            Some(other @ ('"' | '\'' | '\\')) => out.push(other),
            Some(other) => {
                out.push('\\');
                out.push(other);
            }
            None => out.push('\\'),
        }
    }
    out
}

/// Reassembles the exact source text from a token stream.
pub fn concat(tokens: &[Token]) -> String {
    let mut out = String::new();
    for tok in tokens {
        for t in &tok.leading {
            out.push_str(&t.text);
        }
        out.push_str(&tok.text);
    }
    out
}
