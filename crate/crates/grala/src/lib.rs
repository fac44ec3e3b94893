//! GrALa, the graph analytical language: a small scripting front-end whose
//! values are graphs, graph collections, element sets and scalars, with
//! higher-order operators (select, aggregate, summarize, match, apply,
//! reduce, call) dispatching to the analytical engine underneath.
//!
//! The supported grammar is documented in `docs/grammar.md`; script files
//! use UTF-8 and the `.grala` extension.

pub mod ast;
pub mod eval;
pub mod lexer;
pub mod parser;
pub mod token;
pub mod value;

use thiserror::Error;

pub use ast::{Expr, Lambda, LambdaBody, Script, Stmt};
pub use eval::{run_parsed, run_script, RunOutcome, StatementTiming};
pub use parser::parse;
pub use token::{Pos, Token, TokenKind};
pub use value::{Env, LambdaValue, Value};

#[derive(Debug, Error)]
pub enum GralaError {
    #[error("lex error at {pos}: {message}")]
    Lex { pos: Pos, message: String },

    #[error("parse error at {pos}: {message}")]
    Parse { pos: Pos, message: String },

    #[error("eval error at {pos}: {message}")]
    Eval { pos: Pos, message: String },
}

impl GralaError {
    pub fn pos(&self) -> Pos {
        match self {
            GralaError::Lex { pos, .. }
            | GralaError::Parse { pos, .. }
            | GralaError::Eval { pos, .. } => *pos,
        }
    }

    /// True for errors produced before evaluation started.
    pub fn is_syntactic(&self) -> bool {
        matches!(self, GralaError::Lex { .. } | GralaError::Parse { .. })
    }
}
