//! Lexing, parsing and printing of the Java-like source subset.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod printer;

use crate::error::SyntaxError;
use ast::CompilationUnit;
use lexer::Token;

/// A parsed `.java` file together with the tokens its tree refers to.
#[derive(Debug, Clone)]
pub struct ParsedFile {
    /// Path relative to the source root, `/`-separated.
    pub path: String,
    pub source: String,
    pub tokens: Vec<Token>,
    pub unit: CompilationUnit,
}

impl ParsedFile {
    pub fn parse(source: String, path: &str) -> Result<ParsedFile, SyntaxError> {
        let tokens = lexer::tokenize(&source, path)?;
        let unit = parser::parse_compilation_unit(&tokens, path)?;
        Ok(ParsedFile {
            path: path.to_string(),
            source,
            tokens,
            unit,
        })
    }

    pub fn line_of(&self, token: usize) -> u32 {
        self.tokens.get(token).map_or(1, |t| t.span.start_line)
    }
}
