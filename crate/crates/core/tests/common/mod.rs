#![allow(dead_code)]

pub mod strategies;

use std::path::PathBuf;

use vpc_core::engine::{check_proof, CheckReport};
use vpc_core::formats::{parse_proof, Conclusion, ProofScript, ScriptKind};
use vpc_core::model::build::prog;
use vpc_core::registry::{CpeEntry, Entry, EntryKind, FalseEntry, ProofRef, Registry};
use vpc_core::MachineParams;

/// Fixture proofs in the order they are printed; each may cite the ones
/// before it.
pub const FIXTURE_ORDER: [&str; 29] = [
    "T1", "T17", "T18", "L3", "L4", "L5", "T19", "L6", "L7", "T20", "L8", "L9", "T21", "L10", "L11", "T22", "L12",
    "L13", "T23", "L14", "L15", "L16", "L17", "T24", "L18", "T25", "T26", "T27", "T28",
];

pub fn fixture_dir() -> PathBuf {
    // Shared with the cli crate's tests, so resolve from the workspace.
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/proofs")
}

pub fn fixture(id: &str) -> ProofScript {
    let path = fixture_dir().join(format!("{id}.prf"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_proof(&text).unwrap_or_else(|e| panic!("{id}: {e}"))
}

pub fn params() -> MachineParams {
    MachineParams::default()
}

pub fn seed() -> Registry {
    Registry::seed(&params()).expect("seed store loads")
}

/// The entry a checked script proves.
pub fn entry_of(script: &ProofScript, deps: Vec<String>) -> Entry {
    let proof = Some(ProofRef::Script(format!("{}.prf", script.id)));
    match &script.header.conclusion {
        Conclusion::False => {
            Entry::False(FalseEntry { id: script.id.clone(), program: prog(script.header.premise.clone()), deps, proof })
        }
        Conclusion::Statements(c) => Entry::Cpe(CpeEntry {
            id: script.id.clone(),
            kind: match script.kind {
                ScriptKind::Theorem => EntryKind::Theorem,
                ScriptKind::Lemma => EntryKind::Lemma,
            },
            premise: prog(script.header.premise.clone()),
            conclusion: prog(c.clone()),
            deps,
            proof,
        }),
    }
}

/// Check every fixture in order against the seed store, adding each one
/// after it is checked so later proofs can cite it.
pub fn check_all() -> (Registry, Vec<CheckReport>) {
    let p = params();
    let mut reg = seed();
    let mut reports = Vec::new();
    for id in FIXTURE_ORDER {
        let script = fixture(id);
        let report = check_proof(&script, &reg, &p);
        reg.add_entry(entry_of(&script, report.deps.clone()), &p).expect("fixture entry is valid");
        reports.push(report);
    }
    (reg, reports)
}

use vpc_core::engine::{match_statement_all, DerivOption, Derivation, Target};
use vpc_core::formats::{ConnectionList, LineContent, ProofLine};
use vpc_core::model::Substitution;

/// Whether `opt` offers `printed` via `conn`, up to renaming of the
/// outputs the option invented.
pub fn offers(opt: &DerivOption, printed: &LineContent, conn: &ConnectionList) -> bool {
    opt.sources.iter().any(|src| {
        if &src.connection != conn || opt.conclusion.len() != 1 {
            return false;
        }
        match (&opt.conclusion[0], printed) {
            (LineContent::False, LineContent::False) => true,
            (LineContent::Stmt(o), LineContent::Stmt(p)) => match_statement_all(o, p, &Substitution::new())
                .iter()
                .any(|s| s.iter().all(|(k, v)| v.var() == Some(k) || src.fresh.contains(k))),
            _ => false,
        }
    })
}

fn step(d: &mut Derivation, target: Target, line: &ProofLine, conn: &ConnectionList, reg: &Registry, check_options: bool) -> Result<(), String> {
    let content = if matches!(reg.get(&conn.entry), Some(Entry::False(_))) { LineContent::False } else { line.content.clone() };
    if check_options {
        let opts = d.generate_options(target, reg, &params()).map_err(|e| e.to_string())?;
        if !opts.iter().any(|o| offers(o, &content, conn)) {
            return Err(format!("line {}: `{}` {conn} is not among the {} options", line.label, content.render(), opts.len()));
        }
    }
    d.apply_line(target, content, conn.clone(), reg, &params()).map_err(|e| format!("line {}: {e}", line.label))
}

/// Rebuild a printed proof interactively: one step per single-list line,
/// and split, branch steps and contraction for composite lines.
pub fn replay(script: &ProofScript, reg: &Registry, check_options: bool) -> Result<Derivation, String> {
    let p = params();
    let n = script.lines.iter().take_while(|l| l.connections.is_empty()).count();
    let premises = script.lines[..n].iter().filter_map(|l| l.content.statement().cloned()).collect();
    let mut d = Derivation::new(premises, &p).map_err(|e| e.to_string())?;
    let mut split_label = None;
    for line in &script.lines {
        if line.label > n {
            match line.connections.as_slice() {
                [conn] => step(&mut d, Target::Main, line, conn, reg, check_options)?,
                lists => {
                    let s = split_label.take().ok_or("composite line without a split")?;
                    d.split_at(s, &p).map_err(|e| e.to_string())?;
                    for (j, conn) in lists.iter().enumerate() {
                        step(&mut d, Target::Branch(j), line, conn, reg, check_options)?;
                    }
                    let goal = line.content.statement().cloned();
                    d.contract(goal.as_ref(), &p).map_err(|e| format!("line {}: {e}", line.label))?;
                    let got = d.lines().last().unwrap();
                    if got.content != line.content || got.connections() != line.connections {
                        return Err(format!("line {}: contraction gave `{}` {:?}", line.label, got.content.render(), got.connections()));
                    }
                }
            }
        }
        if line.split_mark {
            split_label = Some(line.label);
        }
    }
    Ok(d)
}
