//! Concrete syntax: `.hspec` specification files and `.hmodel` model files.
//!
//! The grammar is line-friendly and LL: `--` comments run to end of line,
//! identifiers are ASCII `[A-Za-z][A-Za-z0-9_]*`, numerals name nullary ops.
//! Axioms are `.`-prefixed sentences; connectors bind `not` tightest, then
//! `/\`, `\/`, `=>` (right-associative), `<=>` loosest. `@ n : rho` scopes
//! rho up to but not across `=>`; `@ n rho` takes a single prefix argument;
//! quantifier bodies extend as far to the right as possible.

mod lexer;
mod model;
mod print;
mod spec;

pub use lexer::{lex, Token, TokenKind};
pub use model::{parse_model, parse_model_named};
pub use print::{print_model, print_sentence, print_spec};
pub use spec::{
    parse_goal, parse_spec, parse_spec_named, BaseBlock, BaseTag, HybridBlock, HybridTag,
    ParseOptions, SpecBlock, SpecFile,
};

/// Names with fixed meaning inside sentences or binders; declarations may
/// not reuse them.
pub const RESERVED: &[&str] = &[
    "not", "forall", "exists", "forallH", "existsH", "true", "false", "World",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

/// A positioned message pointing into the parsed text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub file: String,
    pub line: usize,
    pub col: usize,
    pub severity: Severity,
    pub message: String,
    pub excerpt: String,
}

impl Diagnostic {
    pub fn error(file: &str, line: usize, col: usize, message: String, excerpt: String) -> Self {
        Diagnostic {
            file: file.to_string(),
            line,
            col,
            severity: Severity::Error,
            message,
            excerpt,
        }
    }
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let severity = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(
            f,
            "{}:{}:{}: {}: {}",
            self.file, self.line, self.col, severity, self.message
        )?;
        if !self.excerpt.is_empty() {
            write!(f, "\n  | {}", self.excerpt)?;
        }
        Ok(())
    }
}
