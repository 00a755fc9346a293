//! The nonatomic programs `Neq`, `Le` and `Abs`, defined as disjunctions.

use super::names::ProgName;
use super::program::{Atomic, InTerm, Program, Statement};

pub const SUGAR_PROGRAMS: &[&str] = &["Neq", "Le", "Abs"];

/// Whether `s` is a sugar statement of the right shape to be expanded.
pub fn is_sugar(s: &Statement) -> bool {
    match s {
        Statement::Atomic(a) => matches!(
            (a.name.as_str(), a.inputs.len(), a.outputs.len()),
            ("Neq", 2, 0) | ("Le", 2, 0) | ("Abs", 3, 1)
        ),
        Statement::Disjunction(_) => false,
    }
}

fn call(name: &str, inputs: Vec<InTerm>, outputs: Vec<super::VarName>) -> Statement {
    Statement::Atomic(Atomic::new(ProgName::new(name).expect("built-in name"), inputs, outputs))
}

fn single(s: Statement) -> Program {
    Program::raw(vec![s])
}

/// One level of expansion:
///
/// * `Neq([a,b],[])` is `Lt([a,b],[])|Lt([b,a],[])`
/// * `Le([a,b],[])` is `Lt([a,b],[])|Eq([a,b],[])`
/// * `Abs([x,z,m],[y])` is `[Lt([x,z],[]),Mult([m,x],[y])]|[Le([z,x],[]),Aid([x],[y])]`
///
/// Anything else comes back unchanged. `Le` inside the `Abs` expansion is
/// left as sugar.
pub fn expand_nonatomic(s: &Statement) -> Statement {
    if !is_sugar(s) {
        return s.clone();
    }
    let a = s.atomic().expect("sugar is atomic");
    let i = &a.inputs;
    match a.name.as_str() {
        "Neq" => Statement::Disjunction(vec![
            single(call("Lt", vec![i[0].clone(), i[1].clone()], vec![])),
            single(call("Lt", vec![i[1].clone(), i[0].clone()], vec![])),
        ]),
        "Le" => Statement::Disjunction(vec![
            single(call("Lt", vec![i[0].clone(), i[1].clone()], vec![])),
            single(call("Eq", vec![i[0].clone(), i[1].clone()], vec![])),
        ]),
        "Abs" => {
            let y = a.outputs.clone();
            Statement::Disjunction(vec![
                Program::raw(vec![
                    call("Lt", vec![i[0].clone(), i[1].clone()], vec![]),
                    call("Mult", vec![i[2].clone(), i[0].clone()], y.clone()),
                ]),
                Program::raw(vec![
                    call("Le", vec![i[1].clone(), i[0].clone()], vec![]),
                    call("Aid", vec![i[0].clone()], y),
                ]),
            ])
        }
        _ => unreachable!("is_sugar covers the names"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build::*;

    #[test]
    fn neq_and_le() {
        let neq = atomic("Neq", vec![v("a"), int(0)], &[]);
        assert_eq!(
            expand_nonatomic(&neq),
            Statement::Disjunction(vec![
                prog(vec![atomic("Lt", vec![v("a"), int(0)], &[])]),
                prog(vec![atomic("Lt", vec![int(0), v("a")], &[])]),
            ])
        );
        let le = atomic("Le", vec![v("a"), v("b")], &[]);
        assert_eq!(
            expand_nonatomic(&le),
            Statement::Disjunction(vec![
                prog(vec![atomic("Lt", vec![v("a"), v("b")], &[])]),
                prog(vec![atomic("Eq", vec![v("a"), v("b")], &[])]),
            ])
        );
    }

    #[test]
    fn abs_keeps_constants_in_place() {
        let abs = atomic("Abs", vec![v("x"), int(0), int(-1)], &["y"]);
        let expected = Statement::Disjunction(vec![
            prog(vec![
                atomic("Lt", vec![v("x"), int(0)], &[]),
                atomic("Mult", vec![int(-1), v("x")], &["y"]),
            ]),
            prog(vec![
                atomic("Le", vec![int(0), v("x")], &[]),
                atomic("Aid", vec![v("x")], &["y"]),
            ]),
        ]);
        assert_eq!(expand_nonatomic(&abs), expected);
    }

    #[test]
    fn others_unchanged() {
        let add = atomic("Add", vec![v("a"), v("b")], &["c"]);
        assert_eq!(expand_nonatomic(&add), add);
        let odd_le = atomic("Le", vec![v("a")], &[]);
        assert_eq!(expand_nonatomic(&odd_le), odd_le);
    }
}
