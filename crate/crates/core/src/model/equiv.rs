//! Program equivalence, decided through a disjunctive normal form.

use super::program::{Program, Statement};
use super::sugar::{expand_nonatomic, is_sugar};
use crate::formats::render_statement;

/// Disjunction of plain statement lists. Each plain list is the sorted
/// multiset of rendered atomic statements; the disjuncts are sorted too.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(pub Vec<Vec<String>>);

fn drop_empty(mut forms: Vec<Vec<String>>) -> Vec<Vec<String>> {
    if forms.iter().any(|f| !f.is_empty()) {
        forms.retain(|f| !f.is_empty());
    }
    forms
}

fn statement_forms(s: &Statement) -> Vec<Vec<String>> {
    if is_sugar(s) {
        return statement_forms(&expand_nonatomic(s));
    }
    match s {
        Statement::Atomic(_) => vec![vec![render_statement(s)]],
        Statement::Disjunction(ops) => drop_empty(ops.iter().flat_map(program_forms).collect()),
    }
}

fn program_forms(p: &Program) -> Vec<Vec<String>> {
    let mut acc: Vec<Vec<String>> = vec![Vec::new()];
    for s in p {
        let forms = statement_forms(s);
        let mut next = Vec::with_capacity(acc.len() * forms.len());
        for prefix in &acc {
            for form in &forms {
                let mut joined = prefix.clone();
                joined.extend(form.iter().cloned());
                next.push(joined);
            }
        }
        acc = next;
    }
    acc
}

pub fn canonical_form(p: &Program) -> CanonicalForm {
    let mut forms = drop_empty(program_forms(p));
    for f in &mut forms {
        f.sort();
    }
    forms.sort();
    CanonicalForm(forms)
}

/// Program equivalence: the reflexive, symmetric and transitive closure of
/// [`equiv_step`], decided by comparing canonical forms.
pub fn equiv(u: &Program, v: &Program) -> bool {
    u == v || canonical_form(u) == canonical_form(v)
}

fn multiset_eq<T: PartialEq>(a: &[T], b: &[T]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    a.iter().all(|x| {
        match b.iter().enumerate().position(|(i, y)| !used[i] && y == x) {
            Some(i) => {
                used[i] = true;
                true
            }
            None => false,
        }
    })
}

fn single_disjunction(p: &Program) -> Option<&[Program]> {
    match p.statements() {
        [Statement::Disjunction(ops)] => Some(ops),
        _ => None,
    }
}

fn step_one_way(u: &Program, v: &Program) -> bool {
    let us = u.statements();
    // List permutation (covers identity, and [[~],u], [u,[~]] after the
    // grammar flattens nested lists).
    if multiset_eq(us, v.statements()) {
        return true;
    }
    let Some(v_ops) = single_disjunction(v) else {
        return false;
    };
    // a|b against b|a.
    if let Some(u_ops) = single_disjunction(u) {
        if multiset_eq(u_ops, v_ops) {
            return true;
        }
    }
    // [p, a|b] against [p,a]|[p,b].
    if let Some((Statement::Disjunction(ops), prefix)) = us.split_last() {
        if ops.len() == v_ops.len()
            && ops.iter().zip(v_ops).all(|(a, w)| {
                let mut joined = prefix.to_vec();
                joined.extend(a.statements().iter().cloned());
                joined == w.statements()
            })
        {
            return true;
        }
    }
    // [a|b, p] against [a,p]|[b,p].
    if let Some((Statement::Disjunction(ops), suffix)) = us.split_first() {
        if ops.len() == v_ops.len()
            && ops.iter().zip(v_ops).all(|(a, w)| {
                let mut joined = a.statements().to_vec();
                joined.extend(suffix.iter().cloned());
                joined == w.statements()
            })
        {
            return true;
        }
    }
    // [~]|u against u.
    v_ops.len() == 2 && v_ops[0].is_empty() && v_ops[1] == *u
}

/// One of the itemized equivalence relations holds directly, in either
/// direction.
pub fn equiv_step(u: &Program, v: &Program) -> bool {
    step_one_way(u, v) || step_one_way(v, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build::*;

    fn s(name: &str, a: &str, b: &str) -> Statement {
        atomic(name, vec![v(a), v(b)], &[])
    }

    fn disj(ops: Vec<Vec<Statement>>) -> Statement {
        Statement::Disjunction(ops.into_iter().map(prog).collect())
    }

    #[test]
    fn commutativity() {
        let ab = prog(vec![disj(vec![vec![s("Lt", "a", "b")], vec![s("Eq", "a", "b")]])]);
        let ba = prog(vec![disj(vec![vec![s("Eq", "a", "b")], vec![s("Lt", "a", "b")]])]);
        assert!(equiv_step(&ab, &ba));
        assert!(equiv(&ab, &ba));
    }

    #[test]
    fn empty_tail() {
        let p = prog(vec![s("Lt", "a", "b")]);
        assert!(equiv_step(&p, &p.clone()));
        assert!(equiv(&p, &p));
    }

    #[test]
    fn different_programs() {
        let add = prog(vec![atomic("Add", vec![v("a"), v("b")], &["c"])]);
        let mult = prog(vec![atomic("Mult", vec![v("a"), v("b")], &["c"])]);
        assert!(!equiv_step(&add, &mult));
        assert!(!equiv(&add, &mult));
    }

    #[test]
    fn distributivity_both_sides() {
        let p = s("Int", "x", "y");
        let a = s("Lt", "a", "b");
        let b = s("Eq", "a", "b");
        let u = prog(vec![p.clone(), disj(vec![vec![a.clone()], vec![b.clone()]])]);
        let v_ = prog(vec![disj(vec![vec![p.clone(), a.clone()], vec![p.clone(), b.clone()]])]);
        assert!(equiv_step(&u, &v_));
        assert!(equiv(&u, &v_));
        let u = prog(vec![disj(vec![vec![a.clone()], vec![b.clone()]]), p.clone()]);
        let v_ = prog(vec![disj(vec![vec![a, p.clone()], vec![b, p]])]);
        assert!(equiv_step(&u, &v_));
        assert!(equiv(&u, &v_));
    }

    #[test]
    fn permutation() {
        let s1 = s("Lt", "a", "b");
        let s2 = s("Eq", "b", "c");
        let s3 = atomic("Add", vec![v("a"), v("c")], &["d"]);
        let u = prog(vec![s1.clone(), s2.clone(), s3.clone()]);
        let w = prog(vec![s3, s1, s2]);
        assert!(equiv_step(&u, &w));
        assert!(equiv(&u, &w));
    }

    #[test]
    fn empty_operand_absorbed() {
        let u = prog(vec![s("Lt", "a", "b")]);
        let w = prog(vec![Statement::Disjunction(vec![Program::empty(), u.clone()])]);
        assert!(equiv_step(&u, &w));
        assert!(equiv(&u, &w));
    }

    #[test]
    fn sugar_equals_its_expansion() {
        let le = prog(vec![s("Le", "a", "b")]);
        let expanded = prog(vec![disj(vec![vec![s("Eq", "a", "b")], vec![s("Lt", "a", "b")]])]);
        assert!(equiv(&le, &expanded));
    }
}
