//! The constraint grammar: parsing strings such as `"|i| <= 2"` or
//! `"o_p - 2i = 1"` into terms, and rendering terms back to strings.
//!
//! ```text
//! constraint := expr ("<=" | ">=" | "=") expr
//!             | "|" expr "|" "<=" expr
//! expr       := ["+" | "-"] product (("+" | "-") product)*
//! product    := factor (["*" | "/"] factor)*
//! factor     := number | variable | "(" expr ")" | "-" factor
//! ```
//!
//! A factor followed directly by a variable or `(` is an implicit product,
//! so `2o`, `2 o` and `2*o` are the same.

mod ast;
mod lexer;
mod render;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use ast::{ConstraintKind, ConstraintSyntaxTree, ExprNode};
pub use render::{format_number, render, render_expr, render_term, render_with, Precision};

use crate::polyhedral::{LinearExpr, LinearTerm, TermList};

/// A syntax error with its 1-based position.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: expected ", self.line, self.column)?;
        match self.expected.as_slice() {
            [one] => write!(f, "{one}")?,
            many => write!(f, "one of {}", many.join(", "))?,
        }
        write!(f, ", found {}", self.found)
    }
}

/// Parses one constraint into its syntax tree.
pub fn parse_syntax(line: &str) -> Result<ConstraintSyntaxTree, ParseError> {
    ast::Parser::new(line, 1)?.constraint()
}

/// Parses one constraint line. `|e| <= k` yields two terms.
pub fn parse_constraint(line: &str) -> Result<Vec<LinearTerm>, ParseError> {
    parse_line(line, 1)
}

fn parse_line(line: &str, number: usize) -> Result<Vec<LinearTerm>, ParseError> {
    ast::Parser::new(line, number)?.constraint()?.lower(number)
}

/// Parses constraint lines into one conjunction; errors carry the line number.
pub fn parse_constraints<S: AsRef<str>>(lines: &[S]) -> Result<TermList, ParseError> {
    let mut terms = Vec::new();
    for (k, line) in lines.iter().enumerate() {
        terms.extend(parse_line(line.as_ref(), k + 1)?);
    }
    Ok(TermList::new(terms))
}

/// Parses a linear expression such as an objective.
pub fn parse_expr(src: &str) -> Result<LinearExpr, ParseError> {
    let node = ast::Parser::new(src, 1)?.full_expr()?;
    ast::linearize(&node, 1)
}
