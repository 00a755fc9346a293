//! Rendering a derivation as a proof listing.

use super::derivation::Derivation;
use super::extract::{extract_theorem, ExtractConfig};
use super::EngineError;
use crate::formats::{ProofLine, ProofScript, ScriptKind};
use crate::params::MachineParams;
use crate::registry::{Entry, EntryKind, Registry};

/// The listing of the main derivation, headed by what it proves.
pub fn to_script(d: &Derivation, kind: ScriptKind, id: &str, registry: &Registry, params: &MachineParams) -> Result<ProofScript, EngineError> {
    let entry_kind = match kind {
        ScriptKind::Theorem => EntryKind::Theorem,
        ScriptKind::Lemma => EntryKind::Lemma,
    };
    let mut probe = d.clone();
    if probe.status() == super::Status::Extracted {
        probe.body.status = super::Status::Open;
    }
    let header = match extract_theorem(&probe, entry_kind, id, registry, params, &ExtractConfig::plain())?.entry {
        Entry::Cpe(c) => c.header(),
        Entry::False(f) => f.header(),
        Entry::Schema(_) => unreachable!("extraction never yields a schema"),
    };
    let lines = d
        .lines()
        .iter()
        .map(|l| ProofLine { label: l.label, content: l.content.clone(), split_mark: l.split_mark, connections: l.connections(), span: None })
        .collect();
    Ok(ProofScript { kind, id: id.to_string(), header, lines })
}
