//! The options listing written after each enumeration: one numbered
//! conclusion per line with the connection lists that would be attached.

use serde::{Deserialize, Serialize};

use super::proof::{parse_line, render_proof_line, ConnectionList, LineContent};
use super::ParseError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptionRecord {
    pub number: usize,
    pub conclusion: LineContent,
    pub connections: Vec<ConnectionList>,
}

pub fn render_option_line(number: usize, conclusion: &LineContent, connections: &[ConnectionList]) -> String {
    render_proof_line(number, conclusion, false, connections)
}

pub fn parse_options_file(text: &str) -> Result<Vec<OptionRecord>, ParseError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let pl = parse_line(line, i + 1)?;
        out.push(OptionRecord { number: pl.label, conclusion: pl.content, connections: pl.connections });
    }
    Ok(out)
}
