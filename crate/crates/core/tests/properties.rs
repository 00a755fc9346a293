mod common;

use std::collections::BTreeSet;

use common::strategies::{any_stmt, build, closure, dag, program, rewrite};
use proptest::prelude::*;
use vpc_core::formats::{parse_statement, render_statement};
use vpc_core::model::build::{atomic, prog, v};
use vpc_core::model::{equiv, io_equivalent, validate_program};
use vpc_core::MachineParams;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn equiv_is_reflexive_and_symmetric(p in program(), seed in any::<u64>()) {
        let p0 = validate_program(p.clone(), &MachineParams::default()).unwrap();
        let q = rewrite(&p, seed);
        prop_assert!(equiv(&p0, &p0));
        prop_assert!(equiv(&p0, &q));
        prop_assert!(equiv(&q, &p0));
    }

    #[test]
    fn equiv_is_transitive_on_samples(p in program(), s1 in any::<u64>(), s2 in any::<u64>(), other in program()) {
        let p0 = validate_program(p.clone(), &MachineParams::default()).unwrap();
        let q = rewrite(&p, s1);
        let r = rewrite(q.statements(), s2);
        prop_assert!(equiv(&p0, &q) && equiv(&q, &r));
        prop_assert!(equiv(&p0, &r));
        let o = validate_program(other, &MachineParams::default()).unwrap();
        prop_assert_eq!(equiv(&p0, &o) && equiv(&o, &r), equiv(&p0, &o));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn statements_round_trip_through_text(s in any_stmt()) {
        let text = render_statement(&s);
        let back = parse_statement(&text).unwrap();
        prop_assert_eq!(render_statement(&back), text);
        prop_assert_eq!(back, s);
    }
}

#[test]
fn io_equivalence_is_one_directional() {
    let general = prog(vec![atomic("Add", vec![v("a"), v("b")], &["d"])]);
    let special = prog(vec![atomic("Add", vec![v("a"), v("a")], &["c"])]);
    assert!(io_equivalent(&special, &general).is_ok());
    assert!(io_equivalent(&general, &special).is_err());
}

proptest! {
    #[test]
    fn retract_removes_exactly_the_dependents(shape in dag(), pick in any::<prop::sample::Index>()) {
        let mut r = build(&shape);
        let target = pick.index(shape.len());
        let removed: BTreeSet<String> = r.retract(&format!("E{target}")).unwrap().into_iter().collect();
        let expected: BTreeSet<String> = closure(&shape, &[target]).into_iter().map(|i| format!("E{i}")).collect();
        prop_assert_eq!(&removed, &expected);
        prop_assert_eq!(r.len(), shape.len() + 1 - expected.len());
        for e in r.iter() {
            prop_assert!(e.deps().iter().all(|d| r.contains(d)));
        }
    }

    #[test]
    fn purge_removes_instances_and_their_dependents(shape in dag()) {
        let mut r = build(&shape);
        let hits: Vec<usize> = shape.iter().enumerate().filter(|(_, (same, _))| *same).map(|(i, _)| i).collect();
        let removed: BTreeSet<String> = r.purge_by_falsity("F").unwrap().into_iter().collect();
        let expected: BTreeSet<String> = closure(&shape, &hits).into_iter().map(|i| format!("E{i}")).collect();
        prop_assert_eq!(removed, expected);
        prop_assert!(r.contains("F"));
    }
}
