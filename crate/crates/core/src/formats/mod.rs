//! Text grammars: statements, proof listings, the registry file, machine
//! parameter files and the options listing.

mod config;
mod header;
mod options;
mod proof;
mod registry_file;
mod text;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use config::{parse_config, render_config};
pub use header::{parse_header, render_header, wrap_tokens, Conclusion, Header, WRAP_WIDTH};
pub use options::{parse_options_file, render_option_line, OptionRecord};
pub use proof::{parse_proof, parse_proofs, render_proof, render_proof_line, ConnectionList, LineContent, ProofLine, ProofScript, ScriptKind};
pub use registry_file::{parse_registry_file, render_registry_file};
pub use text::{parse_statement, parse_statements, render_program, render_statement, render_term};

/// 1-based position of a diagnostic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl SourceSpan {
    pub fn new(line: usize, column: usize, length: usize) -> Self {
        SourceSpan { line, column, length }
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
#[error("{span}: {message}")]
pub struct ParseError {
    pub message: String,
    pub span: SourceSpan,
}

impl ParseError {
    pub fn new(message: impl Into<String>, span: SourceSpan) -> Self {
        ParseError { message: message.into(), span }
    }
}

/// Parse a statement list and check it is a program under default limits.
pub fn parse_program(text: &str) -> Result<crate::model::Program, ParseError> {
    let stmts = parse_statements(text)?;
    crate::model::validate_program(stmts, &crate::params::MachineParams::default())
        .map_err(|e| ParseError::new(e.to_string(), SourceSpan::new(1, 1, text.len())))
}
