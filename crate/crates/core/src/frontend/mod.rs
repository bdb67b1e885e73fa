//! Logic-program reader and the clause transformations that precede
//! equation generation.

mod ast;
mod parser;
mod transform;

use thiserror::Error;

pub use ast::{Atom, Clause, Pred, Program, Term};
pub use parser::{parse_atom, parse_program, ParseError};
pub use transform::{
    clause_suffix, make_signatures, normalize_heads, rename_apart, validate, Signature,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrontendError {
    #[error("syntax error at {0}")]
    Parse(#[from] ParseError),
    #[error("line {line}: call to undefined predicate {pred}")]
    UnknownPredicate { pred: Pred, line: usize },
}

/// Parses, validates, renames apart and head-normalizes a program.
pub fn load(text: &str, allow_unknown: bool) -> Result<Program, FrontendError> {
    let p = parse_program(text)?;
    validate(&p, allow_unknown)?;
    Ok(normalize_heads(&rename_apart(&p)))
}
