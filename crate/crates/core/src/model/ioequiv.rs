//! I/O equivalence: one-directional matching of a candidate against a
//! template under a consistent variable substitution.

use serde::{Deserialize, Serialize};

use super::names::VarName;
use super::program::{Atomic, InTerm, Program, Statement};

/// Mapping from template variables to candidate terms. Small, ordered by
/// first binding, and cheap to roll back.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Substitution {
    bindings: Vec<(VarName, InTerm)>,
}

impl Substitution {
    pub fn new() -> Self {
        Substitution::default()
    }

    pub fn get(&self, v: &VarName) -> Option<&InTerm> {
        self.bindings.iter().find(|(k, _)| k == v).map(|(_, t)| t)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(VarName, InTerm)> {
        self.bindings.iter()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn mark(&self) -> usize {
        self.bindings.len()
    }

    pub fn rollback(&mut self, mark: usize) {
        self.bindings.truncate(mark);
    }

    /// Bind `v` or check an existing binding.
    pub fn bind(&mut self, v: &VarName, t: &InTerm) -> bool {
        match self.get(v) {
            Some(existing) => existing == t,
            None => {
                self.bindings.push((v.clone(), t.clone()));
                true
            }
        }
    }

    pub fn insert(&mut self, v: VarName, t: InTerm) {
        self.bindings.retain(|(k, _)| *k != v);
        self.bindings.push((v, t));
    }

    pub fn apply_term(&self, t: &InTerm) -> InTerm {
        match t {
            InTerm::Var(v) => self.get(v).cloned().unwrap_or_else(|| t.clone()),
            InTerm::Prog(p) => InTerm::Prog(self.apply_program(p)),
            _ => t.clone(),
        }
    }

    /// Image of an output name; outputs can only map to variables.
    pub fn apply_output(&self, v: &VarName) -> Option<VarName> {
        match self.get(v) {
            None => Some(v.clone()),
            Some(InTerm::Var(w)) => Some(w.clone()),
            Some(_) => None,
        }
    }

    /// Apply to a statement. Returns `None` when an output would be mapped
    /// to a constant.
    pub fn apply_statement(&self, s: &Statement) -> Option<Statement> {
        Some(match s {
            Statement::Atomic(a) => Statement::Atomic(Atomic::new(
                a.name.clone(),
                a.inputs.iter().map(|t| self.apply_term(t)).collect(),
                a.outputs.iter().map(|o| self.apply_output(o)).collect::<Option<Vec<_>>>()?,
            )),
            Statement::Disjunction(ops) => Statement::Disjunction(
                ops.iter()
                    .map(|p| {
                        p.iter()
                            .map(|s| self.apply_statement(s))
                            .collect::<Option<Vec<_>>>()
                            .map(Program::raw)
                    })
                    .collect::<Option<Vec<_>>>()?,
            ),
        })
    }

    pub fn apply_program(&self, p: &Program) -> Program {
        Program::raw(p.iter().filter_map(|s| self.apply_statement(s)).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatchFailure {
    #[error("programs differ in names or arities")]
    Shape,
    #[error("repeated template variable not mirrored at statement {statement}, element {element}")]
    RepetitionBroken { statement: usize, element: usize },
    #[error("template constant not reproduced at statement {statement}, element {element}")]
    ConstantMismatch { statement: usize, element: usize },
}

/// Match one input term. Template variables bind to anything; template
/// constants must reappear verbatim.
fn match_term(t: &InTerm, c: &InTerm, sub: &mut Substitution) -> Result<(), bool> {
    match t {
        InTerm::Var(v) => {
            if sub.bind(v, c) {
                Ok(())
            } else {
                Err(true)
            }
        }
        InTerm::Prog(tp) => match c {
            InTerm::Prog(cp) if match_program_in_order(tp, cp, sub) => Ok(()),
            _ => Err(false),
        },
        _ => {
            if t == c {
                Ok(())
            } else {
                Err(false)
            }
        }
    }
}

fn match_atomic(t: &Atomic, c: &Atomic, sub: &mut Substitution, statement: usize) -> Result<(), MatchFailure> {
    if t.name != c.name || t.inputs.len() != c.inputs.len() || t.outputs.len() != c.outputs.len() {
        return Err(MatchFailure::Shape);
    }
    for (element, (tt, ct)) in t.inputs.iter().zip(&c.inputs).enumerate() {
        match match_term(tt, ct, sub) {
            Ok(()) => {}
            Err(true) => return Err(MatchFailure::RepetitionBroken { statement, element }),
            Err(false) => return Err(MatchFailure::ConstantMismatch { statement, element }),
        }
    }
    for (k, (to, co)) in t.outputs.iter().zip(&c.outputs).enumerate() {
        if !sub.bind(to, &InTerm::Var(co.clone())) {
            return Err(MatchFailure::RepetitionBroken { statement, element: t.inputs.len() + k });
        }
    }
    Ok(())
}

fn match_statement_at(t: &Statement, c: &Statement, sub: &mut Substitution, statement: usize) -> Result<(), MatchFailure> {
    match (t, c) {
        (Statement::Atomic(ta), Statement::Atomic(ca)) => match_atomic(ta, ca, sub, statement),
        (Statement::Disjunction(tops), Statement::Disjunction(cops)) => {
            if tops.len() != cops.len() {
                return Err(MatchFailure::Shape);
            }
            for (top, cop) in tops.iter().zip(cops) {
                if top.len() != cop.len() {
                    return Err(MatchFailure::Shape);
                }
                for (ts, cs) in top.iter().zip(cop) {
                    match_statement_at(ts, cs, sub, statement)?;
                }
            }
            Ok(())
        }
        _ => Err(MatchFailure::Shape),
    }
}

/// Extend `sub` so that the template statement maps onto the candidate.
/// On failure `sub` is left as it was.
pub fn match_statement(template: &Statement, candidate: &Statement, sub: &mut Substitution) -> bool {
    let mark = sub.mark();
    if match_statement_at(template, candidate, sub, 0).is_ok() {
        true
    } else {
        sub.rollback(mark);
        false
    }
}

/// Statement-by-statement match in list order.
pub fn match_program_in_order(template: &Program, candidate: &Program, sub: &mut Substitution) -> bool {
    if template.len() != candidate.len() {
        return false;
    }
    let mark = sub.mark();
    for (i, (t, c)) in template.iter().zip(candidate).enumerate() {
        if match_statement_at(t, c, sub, i).is_err() {
            sub.rollback(mark);
            return false;
        }
    }
    true
}

/// Whether `candidate` is I/O equivalent to `template`, with the witnessing
/// substitution. Not symmetric: `Add([a,a],[c])` matches `Add([a,b],[d])`
/// but not the other way round.
pub fn io_equivalent(candidate: &Program, template: &Program) -> Result<Substitution, MatchFailure> {
    if candidate.len() != template.len() {
        return Err(MatchFailure::Shape);
    }
    let mut sub = Substitution::new();
    for (i, (t, c)) in template.iter().zip(candidate).enumerate() {
        match_statement_at(t, c, &mut sub, i)?;
    }
    Ok(sub)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build::*;

    fn one(s: Statement) -> Program {
        prog(vec![s])
    }

    #[test]
    fn repeated_candidate_matches_general_template() {
        let cand = one(atomic("Add", vec![v("a"), v("a")], &["c"]));
        let tmpl = one(atomic("Add", vec![v("a"), v("b")], &["d"]));
        let sub = io_equivalent(&cand, &tmpl).unwrap();
        assert_eq!(sub.get(&var("a")), Some(&v("a")));
        assert_eq!(sub.get(&var("b")), Some(&v("a")));
        assert_eq!(sub.get(&var("d")), Some(&v("c")));
        assert_eq!(
            io_equivalent(&tmpl, &cand),
            Err(MatchFailure::RepetitionBroken { statement: 0, element: 1 })
        );
    }

    #[test]
    fn template_variable_may_map_to_constant() {
        let cand = one(atomic("Mult", vec![int(-1), int(1)], &["a"]));
        let tmpl = one(atomic("Mult", vec![int(-1), v("a")], &["b"]));
        let sub = io_equivalent(&cand, &tmpl).unwrap();
        assert_eq!(sub.get(&var("a")), Some(&int(1)));
        assert_eq!(sub.get(&var("b")), Some(&v("a")));
    }

    #[test]
    fn constants_must_reappear() {
        let cand = one(atomic("Mult", vec![v("x"), v("y")], &["z"]));
        let tmpl = one(atomic("Mult", vec![int(-1), v("a")], &["b"]));
        assert_eq!(
            io_equivalent(&cand, &tmpl),
            Err(MatchFailure::ConstantMismatch { statement: 0, element: 0 })
        );
    }

    #[test]
    fn shape_mismatch() {
        let cand = one(atomic("Add", vec![v("a"), v("b")], &["c"]));
        let tmpl = one(atomic("Mult", vec![v("a"), v("b")], &["c"]));
        assert_eq!(io_equivalent(&cand, &tmpl), Err(MatchFailure::Shape));
    }

    #[test]
    fn output_reuse_must_be_mirrored() {
        let tmpl = prog(vec![
            atomic("Add", vec![v("a"), v("b")], &["c"]),
            atomic("Mult", vec![v("c"), v("d")], &["e"]),
        ]);
        let good = prog(vec![
            atomic("Add", vec![v("x"), v("y")], &["z"]),
            atomic("Mult", vec![v("z"), v("x")], &["w"]),
        ]);
        let bad = prog(vec![
            atomic("Add", vec![v("x"), v("y")], &["z"]),
            atomic("Mult", vec![v("y"), v("x")], &["w"]),
        ]);
        assert!(io_equivalent(&good, &tmpl).is_ok());
        assert!(matches!(io_equivalent(&bad, &tmpl), Err(MatchFailure::RepetitionBroken { statement: 1, .. })));
    }

    #[test]
    fn failed_match_leaves_substitution_untouched() {
        let mut sub = Substitution::new();
        sub.bind(&var("a"), &v("x"));
        let t = atomic("Add", vec![v("a"), v("b")], &["c"]);
        let c = atomic("Add", vec![v("y"), v("z")], &["w"]);
        assert!(!match_statement(&t, &c, &mut sub));
        assert_eq!(sub.len(), 1);
    }
}
