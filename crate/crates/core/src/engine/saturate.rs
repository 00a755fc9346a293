//! Bounded forward chaining.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::derivation::{Derivation, Status, Target};
use super::EngineError;
use crate::formats::LineContent;
use crate::model::Statement;
use crate::params::MachineParams;
use crate::registry::Registry;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SaturateConfig {
    pub depth: usize,
    pub line_cap: usize,
}

impl Default for SaturateConfig {
    fn default() -> Self {
        SaturateConfig { depth: 3, line_cap: 150 }
    }
}

/// A statement already counts as present when a line has the same program
/// and inputs.
fn key(s: &Statement) -> String {
    match s.atomic() {
        Some(a) => format!("{}{:?}", a.name, a.inputs),
        None => crate::formats::render_statement(s),
    }
}

/// Apply every new option, round by round, until `False` appears, nothing
/// new is produced, `depth` rounds have run, or the line cap is hit.
pub fn saturate(d: &Derivation, registry: &Registry, config: &SaturateConfig, params: &MachineParams) -> Result<Derivation, EngineError> {
    if config.depth == 0 {
        return Err(EngineError::ZeroDepth);
    }
    let mut out = d.clone();
    for _ in 0..config.depth {
        if out.status() != Status::Open || out.lines().len() >= config.line_cap {
            break;
        }
        let opts = out.generate_options(Target::Main, registry, params)?;
        if let Some(f) = opts.iter().find(|o| o.is_false()) {
            out.body.append_option(f, 0, params)?;
            break;
        }
        let mut present: BTreeSet<String> = out.body.statements().into_iter().map(|(_, s)| key(s)).collect();
        let mut grew = false;
        for o in &opts {
            if out.lines().len() >= config.line_cap {
                break;
            }
            let keys: Vec<String> = o.conclusion.iter().filter_map(LineContent::statement).map(key).collect();
            if keys.iter().all(|k| present.contains(k)) {
                continue;
            }
            if out.body.append_option(o, 0, params).is_ok() {
                present.extend(keys);
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    Ok(out)
}
