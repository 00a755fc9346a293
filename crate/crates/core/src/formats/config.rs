//! `key=value` machine parameter files.

use super::{ParseError, SourceSpan};
use crate::params::MachineParams;

/// Parse `K`, `L`, `M`, `N`, `T` assignments. Missing keys keep their
/// defaults; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<MachineParams, ParseError> {
    let mut p = MachineParams::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let span = SourceSpan::new(i + 1, 1, raw.len());
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| ParseError::new("expected `key=value`", span))?;
        let (key, value) = (key.trim(), value.trim());
        let col = raw.find('=').map_or(1, |c| c + 2);
        let bad = |what: &str| ParseError::new(format!("{key} needs {what}, found `{value}`"), SourceSpan::new(i + 1, col, value.len()));
        match key {
            "K" => p.k = value.parse().map_err(|_| bad("a positive integer"))?,
            "L" => p.l = value.parse().map_err(|_| bad("a positive integer"))?,
            "M" => p.m = value.parse().map_err(|_| bad("a positive integer"))?,
            "N" => p.n = value.parse().map_err(|_| bad("a positive integer"))?,
            "T" => p.t_ms = value.parse().map_err(|_| bad("a positive integer"))?,
            _ => return Err(ParseError::new(format!("unknown parameter `{key}`"), span)),
        }
    }
    p.check().map_err(|e| ParseError::new(e.to_string(), SourceSpan::new(1, 1, 0)))?;
    Ok(p)
}

pub fn render_config(p: &MachineParams) -> String {
    format!("K={}\nL={}\nM={}\nN={}\nT={}\n", p.k, p.l, p.m, p.n, p.t_ms)
}
