//! The `.ori` construction language: parser, canonical printer and
//! interpreter.

mod ast;
mod interp;
mod parser;

pub use ast::*;
pub use interp::{run, RunError};
pub use parser::{parse, ParseError};

use thiserror::Error;

use crate::origami::ConstructionTrace;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScriptError {
    #[error("syntax error at {0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Run(#[from] RunError),
}

/// Parses and runs script text.
pub fn run_source(text: &str) -> Result<ConstructionTrace, ScriptError> {
    Ok(run(&parse(text)?)?)
}
