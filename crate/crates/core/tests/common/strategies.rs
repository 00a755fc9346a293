//! Generators and oracles shared by the property suites.

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use vpc_core::model::build::{atomic, int, prog, v};
use vpc_core::model::{expand_nonatomic, is_sugar, validate_program, InTerm, Program, Statement};
use vpc_core::registry::{CpeEntry, Entry, EntryKind, FalseEntry, ProofRef, Registry};
use vpc_core::MachineParams;

pub const VARS: [&str; 4] = ["a", "b", "c", "d"];

pub fn term() -> impl Strategy<Value = InTerm> {
    prop_oneof![3 => prop::sample::select(&VARS[..]).prop_map(v), 1 => (-1i64..=1).prop_map(int)]
}

/// Zero-output statements over a few variables, sugar included.
pub fn test_stmt() -> impl Strategy<Value = Statement> {
    (prop::sample::select(&["Lt", "Eq", "Le", "Neq"][..]), term(), term())
        .prop_map(|(name, x, y)| atomic(name, vec![x, y], &[]))
}

pub fn any_stmt() -> impl Strategy<Value = Statement> {
    let atom = (prop::sample::select(&["Add", "Mult", "Div", "Lt", "Eq", "Aid", "Int"][..]), term(), term(), "[e-h][0-9]?")
        .prop_map(|(name, x, y, out)| match name {
            "Add" | "Mult" | "Div" => atomic(name, vec![x, y], &[&out]),
            "Aid" => atomic(name, vec![x], &[&out]),
            "Int" => atomic(name, vec![x], &[]),
            _ => atomic(name, vec![x, y], &[]),
        });
    prop_oneof![
        4 => atom,
        1 => prop::collection::vec(prop::collection::vec(test_stmt(), 1..3), 2..4)
            .prop_map(|ops| Statement::Disjunction(ops.into_iter().map(prog).collect())),
    ]
}

pub fn program() -> impl Strategy<Value = Vec<Statement>> {
    prop::collection::vec(test_stmt(), 1..5)
}

/// An equivalent rewrite: shuffle and unfold some sugar.
pub fn rewrite(stmts: &[Statement], seed: u64) -> Program {
    let mut out: Vec<Statement> = stmts
        .iter()
        .enumerate()
        .map(|(i, s)| if is_sugar(s) && (seed >> i) & 1 == 1 { expand_nonatomic(s) } else { s.clone() })
        .collect();
    let n = out.len();
    for i in 0..n {
        let j = (seed.wrapping_mul(6364136223846793005).wrapping_add(i as u64) >> 33) as usize % n;
        out.swap(i, j);
    }
    validate_program(out, &MachineParams::default()).unwrap()
}

pub fn lt_entry(id: &str, same: bool, deps: Vec<String>) -> Entry {
    let prem = if same { atomic("Lt", vec![v("x"), v("x")], &[]) } else { atomic("Lt", vec![v("x"), v("y")], &[]) };
    let kind = if deps.is_empty() { EntryKind::Axiom } else { EntryKind::Theorem };
    Entry::Cpe(CpeEntry {
        id: id.to_string(),
        kind,
        premise: prog(vec![prem]),
        conclusion: prog(vec![atomic("Int", vec![v("x")], &[])]),
        proof: (!deps.is_empty()).then(|| ProofRef::Script(format!("{id}.prf"))),
        deps,
    })
}

/// Random DAG: entry i depends on a subset of entries before it.
pub fn dag() -> impl Strategy<Value = Vec<(bool, Vec<usize>)>> {
    prop::collection::vec((any::<bool>(), prop::collection::vec(any::<prop::sample::Index>(), 0..3)), 1..16).prop_map(|raw| {
        raw.into_iter()
            .enumerate()
            .map(|(i, (same, picks))| {
                let deps: BTreeSet<usize> = if i == 0 { BTreeSet::new() } else { picks.iter().map(|p| p.index(i)).collect() };
                (same, deps.into_iter().collect())
            })
            .collect()
    })
}

pub fn build(shape: &[(bool, Vec<usize>)]) -> Registry {
    let p = MachineParams::default();
    let mut r = Registry::new();
    r.add_entry(Entry::False(FalseEntry { id: "F".into(), program: prog(vec![atomic("Lt", vec![v("a"), v("a")], &[])]), deps: vec![], proof: None }), &p).unwrap();
    for (i, (same, deps)) in shape.iter().enumerate() {
        r.add_entry(lt_entry(&format!("E{i}"), *same, deps.iter().map(|d| format!("E{d}")).collect()), &p).unwrap();
    }
    r
}

/// Closure of `roots` under "is depended on by", computed directly.
pub fn closure(shape: &[(bool, Vec<usize>)], roots: &[usize]) -> BTreeSet<usize> {
    let mut users: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, (_, deps)) in shape.iter().enumerate() {
        for d in deps {
            users.entry(*d).or_default().push(i);
        }
    }
    let mut out = BTreeSet::new();
    let mut stack = roots.to_vec();
    while let Some(n) = stack.pop() {
        if out.insert(n) {
            stack.extend(users.get(&n).into_iter().flatten());
        }
    }
    out
}
