use super::program::{Program, Statement};
use super::sugar::{expand_nonatomic, is_sugar};
use super::validate::{validate_program, ValidityError};
use crate::params::MachineParams;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SplitError {
    #[error("no statement at position {0}")]
    OutOfRange(usize),
    #[error("statement at position {0} is not a disjunction")]
    NotDisjunction(usize),
    #[error("operand program {operand} is not a program: {source}")]
    Operand { operand: usize, source: ValidityError },
}

/// Operand statements of a disjunction (sugar is expanded one level first),
/// or `None` when `s` is not a disjunction.
pub fn operands_of(s: &Statement) -> Option<Vec<Program>> {
    let s = if is_sugar(s) { expand_nonatomic(s) } else { s.clone() };
    match s {
        Statement::Disjunction(ops) => Some(ops),
        Statement::Atomic(_) => None,
    }
}

/// Split `[p, a1|...|an, q]` at `index` into the operand programs
/// `[p, ai, q]`.
pub fn split_disjunction(p: &Program, index: usize, params: &MachineParams) -> Result<Vec<Program>, SplitError> {
    let stmt = p.statements().get(index).ok_or(SplitError::OutOfRange(index))?;
    let ops = operands_of(stmt).ok_or(SplitError::NotDisjunction(index))?;
    ops.into_iter()
        .enumerate()
        .map(|(operand, op)| {
            let mut stmts = p.statements()[..index].to_vec();
            stmts.extend(op.into_statements());
            stmts.extend(p.statements()[index + 1..].iter().cloned());
            validate_program(stmts, params).map_err(|source| SplitError::Operand { operand, source })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build::*;

    #[test]
    fn split_in_the_middle() {
        let p1 = atomic("Int", vec![v("a")], &[]);
        let p2 = atomic("Int", vec![v("b")], &[]);
        let a = atomic("Lt", vec![v("a"), v("b")], &[]);
        let b = atomic("Eq", vec![v("a"), v("b")], &[]);
        let d = Statement::Disjunction(vec![prog(vec![a.clone()]), prog(vec![b.clone()])]);
        let p = prog(vec![p1.clone(), d, p2.clone()]);
        let parts = split_disjunction(&p, 1, &MachineParams::default()).unwrap();
        assert_eq!(parts, vec![prog(vec![p1.clone(), a, p2.clone()]), prog(vec![p1, b, p2])]);
    }

    #[test]
    fn three_operands() {
        let ops: Vec<Program> = ["Int", "Lt", "Eq"]
            .iter()
            .map(|n| {
                let ins = if *n == "Int" { vec![v("a")] } else { vec![v("a"), v("b")] };
                prog(vec![atomic(n, ins, &[])])
            })
            .collect();
        let p = prog(vec![Statement::Disjunction(ops.clone())]);
        assert_eq!(split_disjunction(&p, 0, &MachineParams::default()).unwrap(), ops);
    }

    #[test]
    fn sugar_splits_by_expansion() {
        let p = prog(vec![atomic("Neq", vec![v("a"), int(0)], &[])]);
        let parts = split_disjunction(&p, 0, &MachineParams::default()).unwrap();
        assert_eq!(parts[1], prog(vec![atomic("Lt", vec![int(0), v("a")], &[])]));
    }

    #[test]
    fn atomic_is_rejected() {
        let p = prog(vec![atomic("Add", vec![v("a"), v("b")], &["c"])]);
        assert_eq!(
            split_disjunction(&p, 0, &MachineParams::default()),
            Err(SplitError::NotDisjunction(0))
        );
    }
}
