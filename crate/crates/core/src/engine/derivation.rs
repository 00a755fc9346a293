//! Derivations: numbered lines with connection lists, disjunction splits
//! and contraction.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::matcher::match_statement_all;
use super::EngineError;
use crate::formats::{ConnectionList, LineContent};
use crate::model::{operands_of, validate_program, Program, Statement, Substitution, VarName};
use crate::params::MachineParams;
use crate::registry::{Entry, Registry};
use crate::rulebase::verify_schema;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Open,
    ConcludedFalse,
    Extracted,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Justification {
    Premise,
    Derived { connection: ConnectionList },
    /// Folded back from the branches of a split; one list per branch, with
    /// labels that refer to that branch's lines.
    Contracted { split_label: usize, lists: Vec<ConnectionList>, branches: Vec<Branch> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivLine {
    pub label: usize,
    pub content: LineContent,
    pub split_mark: bool,
    pub justification: Justification,
}

impl DerivLine {
    pub fn connections(&self) -> Vec<ConnectionList> {
        match &self.justification {
            Justification::Premise => vec![],
            Justification::Derived { connection } => vec![connection.clone()],
            Justification::Contracted { lists, .. } => lists.clone(),
        }
    }
}

/// Numbered lines, the first `premise_count` of which are premises.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineSet {
    pub premise_count: usize,
    pub lines: Vec<DerivLine>,
    pub status: Status,
}

/// One operand derivation of a split.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    /// Number of statements the disjunction line was replaced by.
    pub operand_len: usize,
    #[serde(flatten)]
    pub body: LineSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActiveSplit {
    pub label: usize,
    pub branches: Vec<Branch>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    #[serde(flatten)]
    pub body: LineSet,
    pub split: Option<ActiveSplit>,
}

/// Which line set an operation acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    Main,
    Branch(usize),
}

fn fnv(bytes: &[u8], mut h: u64) -> u64 {
    for b in bytes {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100_0000_01b3);
    }
    h
}

/// Map of a branch label back to the label of the host line set, given the
/// split label and the operand length.
pub fn branch_to_main(b: usize, split_label: usize, operand_len: usize) -> usize {
    if b < split_label {
        b
    } else if b < split_label + operand_len {
        split_label
    } else {
        b + 1 - operand_len
    }
}

impl LineSet {
    pub fn from_statements(stmts: &[Statement]) -> Self {
        LineSet {
            premise_count: stmts.len(),
            lines: stmts
                .iter()
                .enumerate()
                .map(|(i, s)| DerivLine {
                    label: i + 1,
                    content: LineContent::Stmt(s.clone()),
                    split_mark: false,
                    justification: Justification::Premise,
                })
                .collect(),
            status: Status::Open,
        }
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn line(&self, label: usize) -> Option<&DerivLine> {
        label.checked_sub(1).and_then(|i| self.lines.get(i))
    }

    /// `(label, statement)` for every line that is not `False`.
    pub fn statements(&self) -> Vec<(usize, &Statement)> {
        self.lines.iter().filter_map(|l| l.content.statement().map(|s| (l.label, s))).collect()
    }

    pub fn program(&self) -> Program {
        crate::model::build::prog(self.statements().into_iter().map(|(_, s)| s.clone()).collect())
    }

    pub fn vars(&self) -> BTreeSet<VarName> {
        let mut out = BTreeSet::new();
        for (_, s) in self.statements() {
            s.collect_vars(&mut out);
        }
        out
    }

    /// Fingerprint of the visible state, used to detect stale options.
    pub fn state_hash(&self) -> u64 {
        let mut h = 0xcbf2_9ce4_8422_2325;
        for l in &self.lines {
            h = fnv(l.content.render().as_bytes(), h);
            for c in l.connections() {
                h = fnv(c.to_string().as_bytes(), h);
            }
            h = fnv(b"\n", h);
        }
        fnv(format!("{:?}", self.status).as_bytes(), h)
    }

    pub(crate) fn ensure_open(&self) -> Result<(), EngineError> {
        match self.status {
            Status::Open => Ok(()),
            Status::ConcludedFalse => Err(EngineError::Concluded),
            Status::Extracted => Err(EngineError::Extracted),
        }
    }

    /// Append derived lines after checking the grown list is a program.
    pub(crate) fn push(&mut self, contents: Vec<LineContent>, justification: Justification, params: &MachineParams) -> Result<(), EngineError> {
        let mut stmts: Vec<Statement> = self.statements().into_iter().map(|(_, s)| s.clone()).collect();
        stmts.extend(contents.iter().filter_map(|c| c.statement().cloned()));
        validate_program(stmts, params)?;
        self.push_unchecked(contents, justification);
        Ok(())
    }

    pub(crate) fn push_unchecked(&mut self, contents: Vec<LineContent>, justification: Justification) {
        for content in contents {
            if content == LineContent::False {
                self.status = Status::ConcludedFalse;
            }
            let label = self.lines.len() + 1;
            self.lines.push(DerivLine { label, content, split_mark: false, justification: justification.clone() });
        }
    }

    /// Statements cited by `labels`, which must name earlier non-`False` lines.
    pub(crate) fn cited(&self, labels: &[usize]) -> Result<Vec<&Statement>, String> {
        labels
            .iter()
            .map(|&l| match self.line(l) {
                Some(line) => line.content.statement().ok_or_else(|| format!("line {l} is `False`")),
                None => Err(format!("no line {l}")),
            })
            .collect()
    }

    /// Check that `printed` follows from the lines by `conn`.
    pub fn justify(&self, conn: &ConnectionList, printed: &LineContent, registry: &Registry) -> Result<(), String> {
        let entry = registry.get(&conn.entry).ok_or_else(|| format!("unknown entry `{}`", conn.entry))?;
        let cited = self.cited(&conn.labels)?;
        let taken = self.vars();
        match entry {
            Entry::Schema(s) => {
                let p = printed.statement().ok_or("a schema does not conclude `False`")?;
                verify_schema(s.form, &cited, p, &taken)
            }
            Entry::False(f) => {
                if printed != &LineContent::False {
                    return Err(format!("`{}` concludes `False`", f.id));
                }
                if cited.len() != f.program.len() {
                    return Err(format!("`{}` needs {} lines, {} cited", f.id, f.program.len(), cited.len()));
                }
                if match_in_order(f.program.statements(), &cited).is_empty() {
                    return Err(format!("cited lines are not an instance of `{}`", f.id));
                }
                Ok(())
            }
            Entry::Cpe(c) => {
                let p = printed.statement().ok_or_else(|| format!("`{}` does not conclude `False`", c.id))?;
                if cited.len() != c.premise.len() {
                    return Err(format!("`{}` needs {} lines, {} cited", c.id, c.premise.len(), cited.len()));
                }
                let subs = match_in_order(c.premise.statements(), &cited);
                if subs.is_empty() {
                    return Err(format!("cited lines are not an instance of the premise of `{}`", c.id));
                }
                if subs.iter().any(|sub| conclusion_fits(&c.conclusion, sub, p, &taken)) {
                    Ok(())
                } else {
                    Err(format!("`{}` does not conclude `{}` from the cited lines", c.id, p))
                }
            }
        }
    }
}

/// Substitutions mapping the template statements, position by position,
/// onto the cited statements.
pub(crate) fn match_in_order(template: &[Statement], cited: &[&Statement]) -> Vec<Substitution> {
    if template.len() != cited.len() {
        return vec![];
    }
    let mut subs = vec![Substitution::new()];
    for (t, c) in template.iter().zip(cited) {
        subs = subs.iter().flat_map(|s| match_statement_all(t, c, s)).collect();
        if subs.is_empty() {
            break;
        }
    }
    subs
}

/// Whether `printed` is one of the conclusion statements under `sub`, with
/// the conclusion's own outputs mapped injectively to fresh names.
fn conclusion_fits(conclusion: &Program, sub: &Substitution, printed: &Statement, taken: &BTreeSet<VarName>) -> bool {
    let own_outputs: BTreeSet<VarName> =
        conclusion.iter().flat_map(Statement::outputs).filter(|o| sub.get(o).is_none()).collect();
    conclusion.iter().any(|t| {
        match_statement_all(t, printed, sub).into_iter().any(|s| {
            let mut images = BTreeSet::new();
            s.iter().skip(sub.len()).all(|(k, v)| match v.var() {
                Some(w) => own_outputs.contains(k) && !taken.contains(w) && images.insert(w.clone()),
                None => false,
            })
        })
    })
}

impl Derivation {
    pub fn new(premises: Vec<Statement>, params: &MachineParams) -> Result<Self, EngineError> {
        let p = validate_program(premises, params)?;
        Ok(Derivation { body: LineSet::from_statements(p.statements()), split: None })
    }

    pub fn lines(&self) -> &[DerivLine] {
        &self.body.lines
    }

    pub fn status(&self) -> Status {
        self.body.status
    }

    pub fn premise_count(&self) -> usize {
        self.body.premise_count
    }

    pub fn split(&self) -> Option<&ActiveSplit> {
        self.split.as_ref()
    }

    pub fn mark_extracted(&mut self) {
        self.body.status = Status::Extracted;
    }

    pub fn target(&self, target: Target) -> Result<&LineSet, EngineError> {
        match target {
            Target::Main => Ok(&self.body),
            Target::Branch(j) => {
                let split = self.split.as_ref().ok_or(EngineError::NoSplit)?;
                split.branches.get(j).map(|b| &b.body).ok_or(EngineError::UnknownBranch(j))
            }
        }
    }

    /// Line set a mutation may act on: the main lines are frozen while a
    /// split is active.
    pub(crate) fn target_mut(&mut self, target: Target) -> Result<&mut LineSet, EngineError> {
        match target {
            Target::Main => {
                if self.split.is_some() {
                    return Err(EngineError::SplitActive);
                }
                Ok(&mut self.body)
            }
            Target::Branch(j) => {
                let split = self.split.as_mut().ok_or(EngineError::NoSplit)?;
                split.branches.get_mut(j).map(|b| &mut b.body).ok_or(EngineError::UnknownBranch(j))
            }
        }
    }

    /// Append `content` justified by `conn`, after checking the step.
    pub fn apply_line(
        &mut self,
        target: Target,
        content: LineContent,
        conn: ConnectionList,
        registry: &Registry,
        params: &MachineParams,
    ) -> Result<(), EngineError> {
        let set = self.target_mut(target)?;
        set.ensure_open()?;
        set.justify(&conn, &content, registry).map_err(EngineError::Rejected)?;
        set.push(vec![content], Justification::Derived { connection: conn }, params)
    }

    /// Replace the disjunction at `label` by each of its operands, giving
    /// one branch per operand.
    pub fn split_at(&mut self, label: usize, params: &MachineParams) -> Result<(), EngineError> {
        if self.split.is_some() {
            return Err(EngineError::SplitActive);
        }
        self.body.ensure_open()?;
        let branches = reconstruct_branches(&self.body.lines, label, params)?;
        self.body.lines[label - 1].split_mark = true;
        self.split = Some(ActiveSplit { label, branches });
        Ok(())
    }

    /// Fold the branches back into the main derivation.
    ///
    /// Every branch must either have reached `False` or derived a common
    /// conclusion that only uses variables of the main derivation (outputs
    /// must be new to it). With `goal` given, that statement is the common
    /// conclusion; otherwise the latest suitable line of the first open
    /// branch is used.
    pub fn contract(&mut self, goal: Option<&Statement>, params: &MachineParams) -> Result<(), EngineError> {
        let split = self.split.as_ref().ok_or(EngineError::NoSplit)?;
        let s = split.label;
        let split_stmt = self.body.line(s).and_then(|l| l.content.statement()).expect("split line is a statement");
        let mut allowed: BTreeSet<VarName> = BTreeSet::new();
        for l in self.body.lines.iter().filter(|l| l.label != s) {
            if let Some(st) = l.content.statement() {
                st.collect_vars(&mut allowed);
            }
        }
        allowed.extend(split_stmt.inputs().iter().filter_map(|t| t.var().cloned()));
        allowed.extend(split_stmt.outputs());
        let main_vars = self.body.vars();
        let eligible = |st: &Statement| {
            let outs = st.outputs();
            let mut vars = BTreeSet::new();
            st.collect_vars(&mut vars);
            outs.iter().all(|o| !main_vars.contains(o))
                && vars.iter().filter(|v| !outs.contains(v)).all(|v| allowed.contains(v))
        };
        let branches = &split.branches;
        let open: Vec<usize> = (0..branches.len()).filter(|&j| branches[j].body.status != Status::ConcludedFalse).collect();

        if open.is_empty() {
            let lists = branches.iter().map(|b| false_list(&b.body)).collect::<Option<Vec<_>>>().ok_or(EngineError::NoCommonConclusion)?;
            let split = self.split.take().expect("checked");
            self.body.push_unchecked(
                vec![LineContent::False],
                Justification::Contracted { split_label: s, lists, branches: split.branches },
            );
            return Ok(());
        }

        let derived = |b: &Branch| -> Vec<(usize, Statement)> {
            b.body
                .lines
                .iter()
                .filter(|l| l.label > b.body.premise_count)
                .filter_map(|l| l.content.statement().map(|st| (l.label, st.clone())))
                .filter(|(_, st)| eligible(st))
                .rev()
                .collect()
        };
        let first = &branches[open[0]];
        let candidates: Vec<Statement> = match goal {
            Some(g) => vec![g.clone()],
            None => derived(first).into_iter().map(|(_, st)| st).collect(),
        };
        for c in candidates {
            if !eligible(&c) {
                continue;
            }
            let mut chosen = Vec::new();
            for &j in &open {
                match derived(&branches[j]).into_iter().find(|(_, st)| same_up_to_outputs(&c, st)) {
                    Some((label, _)) => chosen.push((j, label)),
                    None => break,
                }
            }
            if chosen.len() != open.len() {
                continue;
            }
            let mut lists = Vec::new();
            for (j, b) in branches.iter().enumerate() {
                let list = match chosen.iter().find(|(k, _)| *k == j) {
                    Some((_, label)) => match &b.body.line(*label).expect("chosen line").justification {
                        Justification::Derived { connection } => connection.clone(),
                        _ => return Err(EngineError::NoCommonConclusion),
                    },
                    None => false_list(&b.body).ok_or(EngineError::NoCommonConclusion)?,
                };
                lists.push(list);
            }
            let branches = self.split.as_ref().expect("checked").branches.clone();
            self.body.push(vec![LineContent::Stmt(c)], Justification::Contracted { split_label: s, lists, branches }, params)?;
            self.split = None;
            return Ok(());
        }
        Err(EngineError::NoCommonConclusion)
    }
}

fn false_list(b: &LineSet) -> Option<ConnectionList> {
    b.lines.iter().rev().find(|l| l.content == LineContent::False).and_then(|l| l.connections().into_iter().next())
}

/// Equal statements, or atomic statements that differ only in output names.
pub fn same_up_to_outputs(a: &Statement, b: &Statement) -> bool {
    match (a.atomic(), b.atomic()) {
        (Some(x), Some(y)) => x.name == y.name && x.inputs == y.inputs && x.outputs.len() == y.outputs.len(),
        _ => a == b,
    }
}

/// Branch line sets for splitting the line at `label`: every line before
/// `label` of `lines` becomes a premise, with the disjunction replaced by
/// the statements of one operand.
pub fn reconstruct_branches(lines: &[DerivLine], label: usize, params: &MachineParams) -> Result<Vec<Branch>, EngineError> {
    let line = label.checked_sub(1).and_then(|i| lines.get(i)).ok_or(EngineError::UnknownLabel(label))?;
    let stmt = line.content.statement().ok_or(EngineError::NotDisjunction(label))?;
    let ops = operands_of(stmt).ok_or(EngineError::NotDisjunction(label))?;
    let mut branches = Vec::new();
    for op in ops {
        let mut stmts: Vec<Statement> = Vec::new();
        for l in lines {
            match &l.content {
                LineContent::Stmt(st) if l.label == label => stmts.extend(op.statements().iter().cloned()),
                LineContent::Stmt(st) => stmts.push(st.clone()),
                LineContent::False => return Err(EngineError::Concluded),
            }
        }
        let p = validate_program(stmts, params)?;
        branches.push(Branch { operand_len: op.len(), body: LineSet::from_statements(p.statements()) });
    }
    Ok(branches)
}
