//! Enumerating the lines that can be appended to a line set.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::derivation::{Derivation, Justification, LineSet, Target};
use super::matcher::sublist_matches;
use super::EngineError;
use crate::formats::{ConnectionList, LineContent};
use crate::model::{validate_program, FreshNames, InTerm, Program, Statement, Substitution, VarName};
use crate::params::MachineParams;
use crate::registry::{Entry, Registry};
use crate::rulebase::schema_options;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptionKind {
    Cpe,
    Falsity,
    Schema,
}

/// One way of obtaining an option's conclusion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptionSource {
    pub connection: ConnectionList,
    pub substitution: Substitution,
    pub fresh: Vec<VarName>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivOption {
    pub conclusion: Vec<LineContent>,
    pub sources: Vec<OptionSource>,
    pub kind: OptionKind,
    pub target: Target,
    /// Fingerprint of the line set the option was generated for.
    pub state: u64,
}

impl DerivOption {
    pub fn render_conclusion(&self) -> String {
        self.conclusion.iter().map(LineContent::render).collect::<Vec<_>>().join("; ")
    }

    pub fn is_false(&self) -> bool {
        self.kind == OptionKind::Falsity
    }
}

/// Conclusion of a template under `sub`, inventing names for unbound
/// outputs. `None` when an input stays unbound.
fn instantiate(conclusion: &Program, sub: &Substitution, taken: &BTreeSet<VarName>) -> Option<(Vec<Statement>, Substitution, Vec<VarName>)> {
    let mut s = sub.clone();
    let mut fresh: Vec<VarName> = Vec::new();
    let mut gen = FreshNames::new();
    for st in conclusion {
        for o in st.outputs() {
            if s.get(&o).is_none() {
                let f = gen.next_unused(|v| taken.contains(v) || fresh.contains(v));
                s.insert(o, InTerm::Var(f.clone()));
                fresh.push(f);
            }
        }
    }
    if conclusion.vars().iter().any(|v| s.get(v).is_none()) {
        return None;
    }
    let stmts = conclusion.iter().map(|st| s.apply_statement(st)).collect::<Option<Vec<_>>>()?;
    Some((stmts, s, fresh))
}

impl LineSet {
    /// All applicable steps, merged by conclusion and sorted by its text.
    pub fn options(&self, target: Target, registry: &Registry, params: &MachineParams) -> Vec<DerivOption> {
        let stmts = self.statements();
        let refs: Vec<&Statement> = stmts.iter().map(|(_, s)| *s).collect();
        let labels = |pos: &[usize]| pos.iter().map(|&p| stmts[p].0).collect::<Vec<_>>();
        let taken = self.vars();
        let existing: Vec<Statement> = refs.iter().map(|s| (*s).clone()).collect();
        let fits = |extra: &[Statement]| {
            let mut all = existing.clone();
            all.extend(extra.iter().cloned());
            validate_program(all, params).is_ok()
        };
        let mut found: Vec<(Vec<LineContent>, OptionKind, OptionSource)> = Vec::new();
        for entry in registry.iter() {
            match entry {
                Entry::Cpe(c) => {
                    for (pos, sub) in sublist_matches(c.premise.statements(), &refs, false) {
                        let Some((concl, s, fresh)) = instantiate(&c.conclusion, &sub, &taken) else { continue };
                        if !fits(&concl) {
                            continue;
                        }
                        let source = OptionSource { connection: ConnectionList::new(&c.id, labels(&pos)), substitution: s, fresh };
                        found.push((concl.into_iter().map(LineContent::Stmt).collect(), OptionKind::Cpe, source));
                    }
                }
                Entry::False(f) => {
                    for (pos, sub) in sublist_matches(f.program.statements(), &refs, false) {
                        let source =
                            OptionSource { connection: ConnectionList::new(&f.id, labels(&pos)), substitution: sub, fresh: vec![] };
                        found.push((vec![LineContent::False], OptionKind::Falsity, source));
                    }
                }
                Entry::Schema(sc) => {
                    for m in schema_options(&refs, &[sc.form], &taken) {
                        if !fits(&m.conclusion) {
                            continue;
                        }
                        let source = OptionSource {
                            connection: ConnectionList::new(&sc.id, labels(&m.cited)),
                            substitution: m.substitution,
                            fresh: m.fresh,
                        };
                        found.push((m.conclusion.into_iter().map(LineContent::Stmt).collect(), OptionKind::Schema, source));
                    }
                }
            }
        }
        let state = self.state_hash();
        let mut merged: BTreeMap<String, DerivOption> = BTreeMap::new();
        for (conclusion, kind, source) in found {
            let key = conclusion.iter().map(LineContent::render).collect::<Vec<_>>().join("; ");
            let opt = merged.entry(key).or_insert_with(|| DerivOption { conclusion, sources: vec![], kind, target, state });
            if !opt.sources.contains(&source) {
                opt.sources.push(source);
            }
        }
        merged.into_values().collect()
    }

    /// Append an option's conclusion, renaming invented outputs that have
    /// been taken meanwhile.
    pub(crate) fn append_option(&mut self, opt: &DerivOption, source: usize, params: &MachineParams) -> Result<(), EngineError> {
        let src = opt.sources.get(source).ok_or(EngineError::UnknownSource(source))?;
        let taken = self.vars();
        let mut rename = Substitution::new();
        let mut gen = FreshNames::new();
        let mut used: Vec<VarName> = Vec::new();
        for f in &src.fresh {
            if taken.contains(f) {
                let n = gen.next_unused(|v| taken.contains(v) || src.fresh.contains(v) || used.contains(v));
                used.push(n.clone());
                rename.insert(f.clone(), InTerm::Var(n));
            }
        }
        let contents = opt
            .conclusion
            .iter()
            .map(|c| match c {
                LineContent::Stmt(s) => rename.apply_statement(s).map(LineContent::Stmt),
                LineContent::False => Some(LineContent::False),
            })
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| EngineError::Rejected("output renamed to a constant".into()))?;
        self.push(contents, Justification::Derived { connection: src.connection.clone() }, params)
    }
}

impl Derivation {
    pub fn generate_options(&self, target: Target, registry: &Registry, params: &MachineParams) -> Result<Vec<DerivOption>, EngineError> {
        if target == Target::Main && self.split.is_some() {
            return Err(EngineError::SplitActive);
        }
        let set = self.target(target)?;
        set.ensure_open()?;
        Ok(set.options(target, registry, params))
    }

    /// Apply `source` (usually 0) of an option generated for the current
    /// state of its target.
    pub fn apply_option(&mut self, opt: &DerivOption, source: usize, params: &MachineParams) -> Result<(), EngineError> {
        let set = self.target_mut(opt.target)?;
        set.ensure_open()?;
        if set.state_hash() != opt.state {
            return Err(EngineError::StaleOption);
        }
        set.append_option(opt, source, params)
    }
}
