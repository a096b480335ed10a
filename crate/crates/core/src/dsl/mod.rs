//! Text format for inequality specifications.
//!
//! ```text
//! # comment
//! ineq EX1 "toy" {
//!   dom x0 in [0, 1];
//!   constraint 2 - x0 >= 0;
//!   goal x0*x0 - x0 - 0.1 < 0 \/ x0 - 2 < 0;
//! }
//! ```
//!
//! Variables are `x0 .. x{n-1}`, declared in order by the `dom` lines.
//! Expressions use the usual precedence (`^` with a natural exponent binds
//! tightest, then unary minus, then `* /`, then `+ -`) and the functions
//! `sqrt sin cos atn acs atn2(x, y)` plus the constant `pi`.

mod lexer;
mod parser;
mod printer;

use thiserror::Error;

use crate::expr::Expr;
use crate::spec::InequalitySpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{column}: syntax error: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: `{function}` takes {expected} argument(s), found {found}")]
    Arity {
        line: usize,
        column: usize,
        function: String,
        expected: usize,
        found: usize,
    },
    #[error("{line}:{column}: x{index} is not bound (dimension {dim})")]
    UnboundVariable {
        line: usize,
        column: usize,
        index: usize,
        dim: usize,
    },
    #[error("{line}:{column}: duplicate inequality id `{id}`")]
    DuplicateId { line: usize, column: usize, id: String },
}

impl ParseError {
    pub fn position(&self) -> (usize, usize) {
        match self {
            ParseError::Syntax { line, column, .. }
            | ParseError::Arity { line, column, .. }
            | ParseError::UnboundVariable { line, column, .. }
            | ParseError::DuplicateId { line, column, .. } => (*line, *column),
        }
    }
}

/// Parses every inequality in a source file, in file order.
pub fn parse(src: &str) -> Result<Vec<InequalitySpec>, ParseError> {
    parser::parse(src)
}

/// Renders a spec in the text format; constants keep their literal text.
pub fn print(spec: &InequalitySpec) -> String {
    printer::print(spec)
}

/// Renders a single expression.
pub fn print_expr(e: &Expr) -> String {
    let mut s = String::new();
    printer::write_expr(&mut s, e);
    s
}
