//! Replaying a proof listing against a registry.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::derivation::{reconstruct_branches, Derivation, Justification, Status, Target};
use super::extract::reachable;
use crate::formats::{Conclusion, ConnectionList, LineContent, ProofLine, ProofScript};
use crate::params::MachineParams;
use crate::registry::{Entry, Registry};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineCheck {
    pub label: usize,
    pub ok: bool,
    pub message: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    pub lines: Vec<LineCheck>,
    pub header_ok: bool,
    pub header_message: Option<String>,
    /// Entries the proof uses, sorted.
    pub deps: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.header_ok && self.lines.iter().all(|l| l.ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &LineCheck> {
        self.lines.iter().filter(|l| !l.ok)
    }

    pub fn summary(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "{}: ok ({} lines)", self.id, self.lines.len());
        }
        write!(f, "{}: failed", self.id)?;
        for l in self.failures() {
            write!(f, "\n  line {}: {}", l.label, l.message.as_deref().unwrap_or("rejected"))?;
        }
        if let Some(m) = &self.header_message {
            write!(f, "\n  header: {m}")?;
        }
        Ok(())
    }
}

fn check_composite(d: &Derivation, line: &ProofLine, registry: &Registry, params: &MachineParams) -> Result<(), String> {
    let s = d
        .lines()
        .iter()
        .rev()
        .find(|l| l.split_mark)
        .map(|l| l.label)
        .ok_or("several connection lists but no split line before")?;
    let branches = reconstruct_branches(d.lines(), s, params).map_err(|e| e.to_string())?;
    if branches.len() != line.connections.len() {
        return Err(format!("line {s} has {} operands, {} lists given", branches.len(), line.connections.len()));
    }
    let mut open = 0;
    for (j, (b, conn)) in branches.iter().zip(&line.connections).enumerate() {
        let is_false = matches!(registry.get(&conn.entry), Some(Entry::False(_)));
        let printed = if is_false {
            LineContent::False
        } else {
            open += 1;
            line.content.clone()
        };
        b.body.justify(conn, &printed, registry).map_err(|e| format!("branch {}: {e}", j + 1))?;
    }
    match (&line.content, open) {
        (LineContent::False, n) if n > 0 => Err("`False` needs every branch to reach `False`".into()),
        (LineContent::Stmt(_), 0) => Err("every branch reaches `False`; the line must be `False`".into()),
        _ => Ok(()),
    }
}

/// Replay `script` line by line. Failing lines are still kept so later
/// lines are checked against the listing as printed.
pub fn check_proof(script: &ProofScript, registry: &Registry, params: &MachineParams) -> CheckReport {
    let mut report =
        CheckReport { id: script.id.clone(), lines: vec![], header_ok: false, header_message: None, deps: vec![] };
    let premise_count = script.lines.iter().take_while(|l| l.connections.is_empty()).count();
    let premises: Vec<_> = script.lines[..premise_count].iter().filter_map(|l| l.content.statement().cloned()).collect();
    let mut d = match Derivation::new(premises, params) {
        Ok(d) if d.premise_count() == premise_count => d,
        Ok(_) => {
            report.header_message = Some("a premise line is `False`".into());
            return report;
        }
        Err(e) => {
            report.header_message = Some(format!("premise lines are not a program: {e}"));
            return report;
        }
    };
    for (i, line) in script.lines.iter().enumerate() {
        let mut check = LineCheck { label: line.label, ok: true, message: None };
        if line.label != i + 1 {
            check.ok = false;
            check.message = Some(format!("expected label {}", i + 1));
        }
        if i < premise_count {
            d.body.lines[i].split_mark = line.split_mark;
            report.lines.push(check);
            continue;
        }
        let result = if d.status() != Status::Open {
            Err("line after `False`".to_string())
        } else {
            match line.connections.as_slice() {
                [] => Err("missing connection list".to_string()),
                [conn] => d
                    .apply_line(Target::Main, line.content.clone(), conn.clone(), registry, params)
                    .map_err(|e| e.to_string()),
                _ => check_composite(&d, line, registry, params),
            }
        };
        let appended = matches!((&result, line.connections.len()), (Ok(()), 1));
        if !appended {
            let just = composite_justification(&d, &line.connections, params);
            d.body.push_unchecked(vec![line.content.clone()], just);
        }
        d.body.lines[i].split_mark = line.split_mark;
        if let Err(m) = result {
            check.ok = false;
            check.message = Some(m);
        }
        report.lines.push(check);
    }
    let Some(last) = d.lines().last().map(|l| l.label) else {
        report.header_message = Some("empty proof".into());
        return report;
    };
    let (used, deps) = reachable(d.lines(), d.premise_count(), &[last]);
    report.deps = deps.into_iter().collect();
    let used_stmts: Vec<_> = used.iter().filter_map(|&l| d.body.line(l).and_then(|x| x.content.statement().cloned())).collect();
    let last_content = &d.lines()[last - 1].content;
    let conclusion_ok = match (&script.header.conclusion, last_content) {
        (Conclusion::False, LineContent::False) => true,
        (Conclusion::Statements(c), LineContent::Stmt(s)) => c.len() == 1 && &c[0] == s,
        _ => false,
    };
    if last <= d.premise_count() {
        report.header_message = Some("nothing is derived".into());
    } else if !conclusion_ok {
        report.header_message = Some(format!("the last line `{}` is not the stated conclusion", last_content.render()));
    } else if used_stmts != script.header.premise {
        let shown: Vec<String> = used_stmts.iter().map(crate::formats::render_statement).collect();
        report.header_message = Some(format!("the proof uses premises [{}]", shown.join(" ")));
    } else {
        report.header_ok = true;
    }
    report
}

fn composite_justification(d: &Derivation, lists: &[ConnectionList], params: &MachineParams) -> Justification {
    match lists {
        [] => Justification::Premise,
        [c] => Justification::Derived { connection: c.clone() },
        _ => {
            let s = d.lines().iter().rev().find(|l| l.split_mark).map(|l| l.label);
            match s.and_then(|s| reconstruct_branches(d.lines(), s, params).ok().map(|b| (s, b))) {
                Some((split_label, branches)) if branches.len() == lists.len() => {
                    Justification::Contracted { split_label, lists: lists.to_vec(), branches }
                }
                _ => Justification::Derived { connection: lists[0].clone() },
            }
        }
    }
}
