//! Reading a theorem or falsity template off a derivation.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::derivation::{branch_to_main, DerivLine, Derivation, Justification, Status};
use super::saturate::{saturate, SaturateConfig};
use super::EngineError;
use crate::formats::LineContent;
use crate::model::{build::prog, Statement};
use crate::params::MachineParams;
use crate::registry::{CpeEntry, Entry, EntryKind, FalseEntry, ProofRef, Registry};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractConfig {
    /// Drop one premise at a time and look for `False` again.
    pub check_minimal: bool,
    /// Saturate a non-false result and warn when `False` turns up.
    pub falsity_guard: bool,
    pub saturation: SaturateConfig,
}

impl Default for ExtractConfig {
    fn default() -> Self {
        ExtractConfig { check_minimal: true, falsity_guard: true, saturation: SaturateConfig::default() }
    }
}

impl ExtractConfig {
    /// No saturation checks; the result only depends on the lines.
    pub fn plain() -> Self {
        ExtractConfig { check_minimal: false, falsity_guard: false, ..Default::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extracted {
    pub entry: Entry,
    /// Labels of the premises the result uses.
    pub used_premises: Vec<usize>,
    pub warnings: Vec<String>,
}

/// Premise labels and entry ids reached backwards from `roots`, following
/// contracted lines into their branches.
pub fn reachable(lines: &[DerivLine], premise_count: usize, roots: &[usize]) -> (BTreeSet<usize>, BTreeSet<String>) {
    let mut premises = BTreeSet::new();
    let mut deps = BTreeSet::new();
    let mut seen = BTreeSet::new();
    let mut stack: Vec<usize> = roots.to_vec();
    while let Some(l) = stack.pop() {
        if !seen.insert(l) {
            continue;
        }
        if l <= premise_count {
            premises.insert(l);
            continue;
        }
        let Some(line) = l.checked_sub(1).and_then(|i| lines.get(i)) else { continue };
        match &line.justification {
            Justification::Premise => {
                premises.insert(l);
            }
            Justification::Derived { connection } => {
                deps.insert(connection.entry.clone());
                stack.extend(&connection.labels);
            }
            Justification::Contracted { split_label, lists, branches } => {
                for (list, branch) in lists.iter().zip(branches) {
                    deps.insert(list.entry.clone());
                    let (bp, bd) = reachable(&branch.body.lines, branch.body.premise_count, &list.labels);
                    deps.extend(bd);
                    stack.extend(bp.into_iter().map(|b| branch_to_main(b, *split_label, branch.operand_len)));
                }
            }
        }
    }
    (premises, deps)
}

fn statements_at(d: &Derivation, labels: &BTreeSet<usize>) -> Vec<Statement> {
    labels.iter().filter_map(|&l| d.body.line(l).and_then(|x| x.content.statement().cloned())).collect()
}

/// The entry a derivation proves: its used premises with the last line,
/// or with `False` once the derivation has concluded it.
///
/// A derived theorem or lemma records `<id>.prf` as its proof.
pub fn extract_theorem(
    d: &Derivation,
    kind: EntryKind,
    id: &str,
    registry: &Registry,
    params: &MachineParams,
    config: &ExtractConfig,
) -> Result<Extracted, EngineError> {
    if d.split.is_some() {
        return Err(EngineError::SplitActive);
    }
    if d.status() == Status::Extracted {
        return Err(EngineError::Extracted);
    }
    let last = d.lines().last().ok_or(EngineError::NothingDerived)?;
    if d.lines().len() <= d.premise_count() {
        return Err(EngineError::NothingDerived);
    }
    if last.label <= d.premise_count() {
        return Err(EngineError::LastLineNotDerived);
    }
    let (used, deps) = reachable(d.lines(), d.premise_count(), &[last.label]);
    let premise = statements_at(d, &used);
    let deps: Vec<String> = deps.into_iter().collect();
    let proof = match kind {
        EntryKind::Theorem | EntryKind::Lemma => Some(ProofRef::Script(format!("{id}.prf"))),
        _ => None,
    };
    let mut warnings = Vec::new();
    let entry = match &last.content {
        LineContent::False => {
            if config.check_minimal {
                for (i, &label) in used.iter().enumerate() {
                    let rest: Vec<Statement> =
                        premise.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, s)| s.clone()).collect();
                    let Ok(probe) = Derivation::new(rest, params) else { continue };
                    if saturate(&probe, registry, &config.saturation, params)?.status() == Status::ConcludedFalse {
                        let shown = d.body.line(label).map(|l| l.content.render()).unwrap_or_default();
                        return Err(EngineError::NotMinimal(shown));
                    }
                }
            }
            Entry::False(FalseEntry { id: id.to_string(), program: prog(premise), deps, proof })
        }
        LineContent::Stmt(s) => {
            let mut premise_prog = premise.clone();
            premise_prog.push(s.clone());
            crate::model::validate_program(premise_prog, params)?;
            if config.falsity_guard {
                let probe = Derivation::new(premise.clone(), params)?;
                if saturate(&probe, registry, &config.saturation, params)?.status() == Status::ConcludedFalse {
                    warnings.push("the premise reaches `False`; consider extracting a falsity entry".to_string());
                }
            }
            Entry::Cpe(CpeEntry { id: id.to_string(), kind, premise: prog(premise), conclusion: prog(vec![s.clone()]), deps, proof })
        }
    };
    Ok(Extracted { entry, used_premises: used.into_iter().collect(), warnings })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Target;
    use crate::formats::{parse_registry_file, parse_statement, ConnectionList};

    fn setup() -> (Registry, MachineParams) {
        let p = MachineParams::default();
        let text = "axiom A29\n[ [ Lt([a,b],[]), Lt([b,c],[]) ], Lt([a,c],[]) ]\n\nfalse A33\nLt([a,a],[])\n";
        (Registry::from_entries(parse_registry_file(text).unwrap(), &p).unwrap(), p)
    }

    fn line(d: &mut Derivation, r: &Registry, p: &MachineParams, text: &str, entry: &str, labels: Vec<usize>) {
        let content = if text == "False" { LineContent::False } else { LineContent::Stmt(parse_statement(text).unwrap()) };
        d.apply_line(Target::Main, content, ConnectionList::new(entry, labels), r, p).unwrap();
    }

    #[test]
    fn unused_premises_are_dropped() {
        let (r, p) = setup();
        let prem = ["Lt([a,b],[])", "Lt([c,c],[])", "Lt([b,e],[])"].map(|s| parse_statement(s).unwrap()).to_vec();
        let mut d = Derivation::new(prem, &p).unwrap();
        line(&mut d, &r, &p, "Lt([a,e],[])", "A29", vec![1, 3]);
        let x = extract_theorem(&d, EntryKind::Theorem, "T", &r, &p, &ExtractConfig::default()).unwrap();
        assert_eq!(x.used_premises, vec![1, 3]);
        let Entry::Cpe(c) = x.entry else { panic!() };
        assert_eq!(c.deps, ["A29"]);
        assert_eq!(c.premise.len(), 2);
        assert!(x.warnings.is_empty());
    }

    #[test]
    fn falsity_guard_warns() {
        let (r, p) = setup();
        let prem = ["Lt([a,b],[])", "Lt([b,a],[])"].map(|s| parse_statement(s).unwrap()).to_vec();
        let mut d = Derivation::new(prem, &p).unwrap();
        line(&mut d, &r, &p, "Lt([a,a],[])", "A29", vec![1, 2]);
        let x = extract_theorem(&d, EntryKind::Theorem, "T", &r, &p, &ExtractConfig::default()).unwrap();
        assert_eq!(x.warnings.len(), 1);
    }

    #[test]
    fn non_minimal_falsity_is_refused() {
        let (r, p) = setup();
        let prem = ["Lt([a,a],[])", "Lt([a,a],[])"].map(|s| parse_statement(s).unwrap()).to_vec();
        let mut d = Derivation::new(prem, &p).unwrap();
        line(&mut d, &r, &p, "Lt([a,a],[])", "A29", vec![1, 2]);
        line(&mut d, &r, &p, "False", "A33", vec![3]);
        let err = extract_theorem(&d, EntryKind::Lemma, "L", &r, &p, &ExtractConfig::default()).unwrap_err();
        assert!(matches!(err, EngineError::NotMinimal(_)));
        let x = extract_theorem(&d, EntryKind::Lemma, "L", &r, &p, &ExtractConfig::plain()).unwrap();
        assert!(matches!(x.entry, Entry::False(f) if f.program.len() == 2));
    }

    #[test]
    fn nothing_to_extract() {
        let (r, p) = setup();
        let d = Derivation::new(vec![parse_statement("Lt([a,b],[])").unwrap()], &p).unwrap();
        assert_eq!(extract_theorem(&d, EntryKind::Theorem, "T", &r, &p, &ExtractConfig::plain()), Err(EngineError::NothingDerived));
    }
}
