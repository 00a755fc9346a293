//! The store of axioms, theorems, lemmas, construction rules, falsity
//! templates and schema markers, with the dependency edges used for
//! cascading retraction.

mod entry;

use std::collections::BTreeSet;
use std::path::Path;

use indexmap::IndexMap;

pub use entry::{CpeEntry, Entry, EntryKind, FalseEntry, ProofRef, SchemaEntry, SchemaForm};

use crate::formats::{parse_registry_file, render_registry_file, ParseError};
use crate::model::{concat, validate_program, ValidityError};
use crate::params::MachineParams;

#[derive(Debug, thiserror::Error)]
pub enum RegistryError {
    #[error("entry `{0}` already exists")]
    DuplicateId(String),
    #[error("no entry `{0}`")]
    UnknownId(String),
    #[error("entry `{id}` depends on unknown entry `{dep}`")]
    UnknownDependency { id: String, dep: String },
    #[error("dependency cycle through `{0}`")]
    Cycle(String),
    #[error("entry `{id}` is not valid: {source}")]
    Invalid { id: String, source: ValidityError },
    #[error("entry `{id}`: {message}")]
    Malformed { id: String, message: String },
    #[error("`{0}` is not an axiom")]
    NotAnAxiom(String),
    #[error("`{0}` is not a falsity entry")]
    NotFalse(String),
    #[error("proof rejected: {0}")]
    ProofRejected(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

/// Text of the shipped seed store.
pub const SEED: &str = include_str!("../../data/axiom.dat");

/// Entries in insertion order. Dependencies of an entry are always present
/// and the dependency graph is acyclic.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Registry {
    entries: IndexMap<String, Entry>,
}

fn check_entry(entry: &Entry, params: &MachineParams) -> Result<(), RegistryError> {
    let invalid = |source| RegistryError::Invalid { id: entry.id().to_string(), source };
    let malformed = |message: &str| RegistryError::Malformed { id: entry.id().to_string(), message: message.to_string() };
    match entry {
        Entry::Cpe(c) => {
            validate_program(c.premise.statements().to_vec(), params).map_err(invalid)?;
            validate_program(c.conclusion.statements().to_vec(), params).map_err(invalid)?;
            concat(&c.premise, &c.conclusion, params).map_err(invalid)?;
            if c.conclusion.is_empty() {
                return Err(malformed("empty conclusion"));
            }
            match (c.kind.needs_proof(), &c.proof) {
                (true, None) => return Err(malformed("theorems and lemmas need a proof reference")),
                (false, Some(_)) => return Err(malformed("axioms and construction rules carry no proof")),
                _ => {}
            }
        }
        Entry::False(f) => {
            if f.program.is_empty() {
                return Err(malformed("empty falsity program"));
            }
            validate_program(f.program.statements().to_vec(), params).map_err(invalid)?;
        }
        Entry::Schema(_) => {}
    }
    if entry.deps().iter().any(|d| d == entry.id()) {
        return Err(RegistryError::Cycle(entry.id().to_string()));
    }
    Ok(())
}

impl Registry {
    /// The shipped seed store.
    pub fn seed(params: &MachineParams) -> Result<Self, RegistryError> {
        Self::parse(SEED, params)
    }

    pub fn new() -> Self {
        Registry::default()
    }

    /// Build from entries in any order; every dependency must be present
    /// and the graph acyclic.
    pub fn from_entries(entries: Vec<Entry>, params: &MachineParams) -> Result<Self, RegistryError> {
        let mut map = IndexMap::new();
        for e in entries {
            check_entry(&e, params)?;
            let id = e.id().to_string();
            if map.insert(id.clone(), e).is_some() {
                return Err(RegistryError::DuplicateId(id));
            }
        }
        let reg = Registry { entries: map };
        reg.check_graph()?;
        Ok(reg)
    }

    pub fn parse(text: &str, params: &MachineParams) -> Result<Self, RegistryError> {
        Registry::from_entries(parse_registry_file(text)?, params)
    }

    pub fn render(&self) -> String {
        render_registry_file(self.entries.values())
    }

    pub fn load(path: impl AsRef<Path>, params: &MachineParams) -> Result<Self, RegistryError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|source| RegistryError::Io { path: path.display().to_string(), source })?;
        Registry::parse(&text, params)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), RegistryError> {
        let path = path.as_ref();
        std::fs::write(path, self.render()).map_err(|source| RegistryError::Io { path: path.display().to_string(), source })
    }

    fn check_graph(&self) -> Result<(), RegistryError> {
        for e in self.entries.values() {
            for d in e.deps() {
                if !self.entries.contains_key(d) {
                    return Err(RegistryError::UnknownDependency { id: e.id().to_string(), dep: d.clone() });
                }
            }
        }
        self.topological_order().map(|_| ())
    }

    /// Ids with every entry after its dependencies; ties keep file order.
    pub fn topological_order(&self) -> Result<Vec<String>, RegistryError> {
        let ids: Vec<&String> = self.entries.keys().collect();
        let mut placed: BTreeSet<&str> = BTreeSet::new();
        let mut out = Vec::with_capacity(ids.len());
        while out.len() < ids.len() {
            let before = out.len();
            for id in &ids {
                if placed.contains(id.as_str()) {
                    continue;
                }
                let e = &self.entries[*id];
                if e.deps().iter().all(|d| placed.contains(d.as_str())) {
                    placed.insert(id.as_str());
                    out.push((*id).clone());
                }
            }
            if out.len() == before {
                let stuck = ids.iter().find(|id| !placed.contains(id.as_str())).expect("unplaced entry");
                return Err(RegistryError::Cycle((*stuck).clone()));
            }
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Entry> {
        self.entries.get(id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.entries.contains_key(id)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Entry> {
        self.entries.values()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn cpe_entries(&self) -> impl Iterator<Item = &CpeEntry> {
        self.entries.values().filter_map(|e| match e {
            Entry::Cpe(c) => Some(c),
            _ => None,
        })
    }

    pub fn false_entries(&self) -> impl Iterator<Item = &FalseEntry> {
        self.entries.values().filter_map(|e| match e {
            Entry::False(f) => Some(f),
            _ => None,
        })
    }

    pub fn schemas(&self) -> impl Iterator<Item = &SchemaEntry> {
        self.entries.values().filter_map(|e| match e {
            Entry::Schema(s) => Some(s),
            _ => None,
        })
    }

    /// The schema entry registered for `form`, if any.
    pub fn schema_id(&self, form: SchemaForm) -> Option<&str> {
        self.schemas().find(|s| s.form == form).map(|s| s.id.as_str())
    }

    pub fn add_entry(&mut self, entry: Entry, params: &MachineParams) -> Result<(), RegistryError> {
        if self.entries.contains_key(entry.id()) {
            return Err(RegistryError::DuplicateId(entry.id().to_string()));
        }
        check_entry(&entry, params)?;
        for d in entry.deps() {
            if !self.entries.contains_key(d) {
                return Err(RegistryError::UnknownDependency { id: entry.id().to_string(), dep: d.clone() });
            }
        }
        self.entries.insert(entry.id().to_string(), entry);
        Ok(())
    }

    /// `id` and everything that transitively depends on it, in
    /// topological order (dependencies first).
    pub fn dependents_closure(&self, id: &str) -> Vec<String> {
        let mut hit: BTreeSet<String> = BTreeSet::from([id.to_string()]);
        let order = self.topological_order().unwrap_or_else(|_| self.entries.keys().cloned().collect());
        let mut out = Vec::new();
        for e in &order {
            if e == id || self.entries[e].deps().iter().any(|d| hit.contains(d)) {
                hit.insert(e.clone());
                out.push(e.clone());
            }
        }
        out
    }

    /// Remove `id` with all of its dependents. Returns the removed ids,
    /// dependencies before dependents.
    pub fn retract(&mut self, id: &str) -> Result<Vec<String>, RegistryError> {
        if !self.entries.contains_key(id) {
            return Err(RegistryError::UnknownId(id.to_string()));
        }
        let removed = self.dependents_closure(id);
        for r in &removed {
            self.entries.shift_remove(r);
        }
        Ok(removed)
    }

    /// Retract every entry whose premise contains an instance of the
    /// falsity template `false_id`, cascading to dependents.
    pub fn purge_by_falsity(&mut self, false_id: &str) -> Result<Vec<String>, RegistryError> {
        let template = match self.entries.get(false_id) {
            Some(Entry::False(f)) => f.program.clone(),
            Some(_) => return Err(RegistryError::NotFalse(false_id.to_string())),
            None => return Err(RegistryError::UnknownId(false_id.to_string())),
        };
        let hits: Vec<String> = self
            .cpe_entries()
            .filter(|c| crate::engine::contains_instance(&c.premise, &template))
            .map(|c| c.id.clone())
            .collect();
        let mut removed = Vec::new();
        for h in hits {
            if self.entries.contains_key(&h) {
                removed.extend(self.retract(&h)?);
            }
        }
        Ok(removed)
    }

    /// Turn axiom `id` into a theorem once `script` proves exactly its
    /// premise and conclusion from the other entries.
    pub fn promote(
        &mut self,
        id: &str,
        script: &crate::formats::ProofScript,
        proof_ref: &str,
        params: &MachineParams,
    ) -> Result<(), RegistryError> {
        let axiom = match self.entries.get(id) {
            Some(Entry::Cpe(c)) if c.kind == EntryKind::Axiom => c.clone(),
            Some(_) => return Err(RegistryError::NotAnAxiom(id.to_string())),
            None => return Err(RegistryError::UnknownId(id.to_string())),
        };
        if script.header != axiom.header() {
            return Err(RegistryError::ProofRejected(format!("the proof does not conclude `{id}`")));
        }
        let mut without = self.clone();
        let dependents = self.dependents_closure(id);
        for d in &dependents {
            without.entries.shift_remove(d);
        }
        let report = crate::engine::check_proof(script, &without, params);
        if !report.passed() {
            return Err(RegistryError::ProofRejected(report.summary()));
        }
        let deps = report.deps.clone();
        if let Some(bad) = deps.iter().find(|d| dependents.contains(d)) {
            return Err(RegistryError::Cycle(bad.clone()));
        }
        if let Some(Entry::Cpe(c)) = self.entries.get_mut(id) {
            c.kind = EntryKind::Theorem;
            c.deps = deps;
            c.proof = Some(ProofRef::Script(proof_ref.to_string()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_loads() {
        let r = Registry::seed(&MachineParams::default()).unwrap();
        assert_eq!(r.false_entries().count(), 1);
        assert_eq!(r.schemas().count(), 8);
        let axioms = r.cpe_entries().filter(|c| c.kind == EntryKind::Axiom).count();
        let rules = r.cpe_entries().filter(|c| c.kind == EntryKind::ConstructionRule).count();
        assert_eq!(axioms, 32);
        assert_eq!(rules, 20);
        assert_eq!(Registry::parse(&r.render(), &MachineParams::default()).unwrap(), r);
    }
    use crate::formats::parse_program;

    fn cpe(id: &str, kind: EntryKind, premise: &str, conclusion: &str, deps: &[&str]) -> Entry {
        Entry::Cpe(CpeEntry {
            id: id.into(),
            kind,
            premise: parse_program(premise).unwrap(),
            conclusion: parse_program(conclusion).unwrap(),
            deps: deps.iter().map(|d| d.to_string()).collect(),
            proof: kind.needs_proof().then(|| ProofRef::Script(format!("{id}.prf"))),
        })
    }

    fn small() -> Registry {
        let p = MachineParams::default();
        let mut r = Registry::new();
        r.add_entry(cpe("A14", EntryKind::Axiom, "Int([a],[])", "Mult([-1,a],[b])", &[]), &p).unwrap();
        r.add_entry(cpe("A32", EntryKind::Axiom, "", "Lt([0,1],[])", &[]), &p).unwrap();
        r.add_entry(cpe("T17", EntryKind::Theorem, "", "Lt([-1,0],[])", &["A14", "A32"]), &p).unwrap();
        r.add_entry(cpe("T99", EntryKind::Theorem, "Int([a],[])", "Lt([-1,0],[])", &["T17"]), &p).unwrap();
        r
    }

    #[test]
    fn add_and_duplicate() {
        let mut r = small();
        assert!(r.contains("T17"));
        let again = cpe("A14", EntryKind::Axiom, "Int([a],[])", "Mult([-1,a],[b])", &[]);
        assert!(matches!(r.add_entry(again, &MachineParams::default()), Err(RegistryError::DuplicateId(_))));
    }

    #[test]
    fn lemma_kind_kept() {
        let mut r = small();
        r.add_entry(cpe("L1", EntryKind::Lemma, "Lt([0,a],[]), Mult([a,a],[b])", "Lt([0,b],[])", &[]), &MachineParams::default())
            .unwrap();
        assert!(matches!(r.get("L1"), Some(Entry::Cpe(c)) if c.kind == EntryKind::Lemma));
    }

    #[test]
    fn invalid_entries_rejected() {
        let p = MachineParams::default();
        let mut r = Registry::new();
        let no_proof = Entry::Cpe(CpeEntry {
            id: "T5".into(),
            kind: EntryKind::Theorem,
            premise: parse_program("Int([a],[])").unwrap(),
            conclusion: parse_program("Eq([a,a],[])").unwrap(),
            deps: vec![],
            proof: None,
        });
        assert!(r.add_entry(no_proof, &p).is_err());
        let clash = cpe("A99", EntryKind::Axiom, "Add([a,b],[c])", "Add([a,a],[c])", &[]);
        assert!(matches!(r.add_entry(clash, &p), Err(RegistryError::Invalid { .. })));
        let dangling = cpe("A98", EntryKind::Axiom, "Int([a],[])", "Eq([a,a],[])", &["Z1"]);
        assert!(matches!(r.add_entry(dangling, &p), Err(RegistryError::UnknownDependency { .. })));
    }

    #[test]
    fn retract_cascades() {
        let mut r = small();
        let removed = r.retract("A14").unwrap();
        assert_eq!(removed, vec!["A14", "T17", "T99"]);
        assert_eq!(r.len(), 1);
        assert!(matches!(r.retract("A14"), Err(RegistryError::UnknownId(_))));
    }

    #[test]
    fn retract_leaf() {
        let mut r = small();
        assert_eq!(r.retract("T99").unwrap(), vec!["T99"]);
        assert_eq!(r.len(), 3);
    }

    #[test]
    fn text_round_trip() {
        let r = small();
        let back = Registry::parse(&r.render(), &MachineParams::default()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn cycle_rejected() {
        let text = "theorem X\n[ Lt([0,1],[]) ]\ndeps: Y\nproof: x\n\ntheorem Y\n[ Lt([0,1],[]) ]\ndeps: X\nproof: y\n";
        assert!(matches!(Registry::parse(text, &MachineParams::default()), Err(RegistryError::Cycle(_))));
    }
}
