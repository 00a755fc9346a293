use std::collections::BTreeSet;

use super::names::VarName;
use super::program::{InTerm, Program, Statement};
use crate::params::MachineParams;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ValidityError {
    #[error("output `{name}` of statement {position} is already an output of an earlier statement")]
    DuplicateOutput { name: VarName, position: usize },
    #[error("input `{name}` of statement {position} is an output of that or a later statement")]
    InputUsesLaterOutput { name: VarName, position: usize },
    #[error("list has {len} elements, more than the limit {max}")]
    ListTooLong { len: usize, max: u64 },
    #[error("name `{name}` in statement {position} is longer than {max} characters")]
    BadName { name: String, position: usize, max: u64 },
    #[error("disjunction at statement {position} needs at least two operands")]
    TooFewOperands { position: usize },
    #[error("operands of the disjunction at statement {position} do not share one output list")]
    OperandOutputsDiffer { position: usize },
    #[error("statement {position} of integer program `{name}` takes a program constant")]
    MisplacedConstant { name: String, position: usize },
}

/// Check the structural conditions on a statement list and wrap it as a
/// [`Program`]. Positions in errors are 0-based statement indices.
pub fn validate_program(stmts: Vec<Statement>, params: &MachineParams) -> Result<Program, ValidityError> {
    check_list(&stmts, params)?;
    Ok(Program::raw(stmts))
}

fn check_list(stmts: &[Statement], params: &MachineParams) -> Result<(), ValidityError> {
    if stmts.len() as u64 > params.m {
        return Err(ValidityError::ListTooLong { len: stmts.len(), max: params.m });
    }
    for (position, stmt) in stmts.iter().enumerate() {
        check_statement(stmt, position, params)?;
    }

    let mut seen: BTreeSet<&VarName> = BTreeSet::new();
    let outputs: Vec<Vec<VarName>> = stmts.iter().map(Statement::outputs).collect();
    for (position, outs) in outputs.iter().enumerate() {
        for name in outs {
            if !seen.insert(name) {
                return Err(ValidityError::DuplicateOutput { name: name.clone(), position });
            }
        }
    }

    // Inputs of statement i may not name outputs of statements i..n.
    let mut later: BTreeSet<&VarName> = BTreeSet::new();
    for position in (0..stmts.len()).rev() {
        later.extend(outputs[position].iter());
        for term in stmts[position].inputs() {
            if let InTerm::Var(name) = term {
                if later.contains(&name) {
                    return Err(ValidityError::InputUsesLaterOutput { name, position });
                }
            }
        }
    }
    Ok(())
}

fn check_name(name: &str, position: usize, params: &MachineParams) -> Result<(), ValidityError> {
    if name.len() as u64 > params.l {
        return Err(ValidityError::BadName { name: name.to_string(), position, max: params.l });
    }
    Ok(())
}

fn check_statement(stmt: &Statement, position: usize, params: &MachineParams) -> Result<(), ValidityError> {
    match stmt {
        Statement::Atomic(a) => {
            check_name(a.name.as_str(), position, params)?;
            if (a.inputs.len() + a.outputs.len()) as u64 > params.m {
                return Err(ValidityError::ListTooLong { len: a.inputs.len() + a.outputs.len(), max: params.m });
            }
            let higher = a.is_higher_order();
            for term in &a.inputs {
                match term {
                    InTerm::Var(v) => check_name(v.as_str(), position, params)?,
                    InTerm::Int(_) => {}
                    InTerm::Ep => {
                        if !higher {
                            return Err(ValidityError::MisplacedConstant { name: a.name.to_string(), position });
                        }
                    }
                    InTerm::Prog(p) => {
                        if !higher {
                            return Err(ValidityError::MisplacedConstant { name: a.name.to_string(), position });
                        }
                        check_list(p.statements(), params)?;
                    }
                }
            }
            for out in &a.outputs {
                check_name(out.as_str(), position, params)?;
            }
            Ok(())
        }
        Statement::Disjunction(ops) => {
            if ops.len() < 2 {
                return Err(ValidityError::TooFewOperands { position });
            }
            let mut shared: Option<BTreeSet<VarName>> = None;
            for op in ops {
                check_list(op.statements(), params)?;
                let outs: BTreeSet<VarName> = op.main_io().1.into_iter().collect();
                match &shared {
                    None => shared = Some(outs),
                    Some(first) if *first != outs => return Err(ValidityError::OperandOutputsDiffer { position }),
                    Some(_) => {}
                }
            }
            Ok(())
        }
    }
}

/// Program concatenation `[p,q]`, valid only when the joined list is.
pub fn concat(p: &Program, q: &Program, params: &MachineParams) -> Result<Program, ValidityError> {
    let mut stmts = p.statements().to_vec();
    stmts.extend(q.statements().iter().cloned());
    validate_program(stmts, params)
}

/// True when every statement of `q` equals a statement of `p`, each at a
/// distinct index of `p`, in any order.
pub fn is_sublist(q: &Program, p: &Program) -> bool {
    let mut used = vec![false; p.len()];
    'outer: for stmt in q {
        for (i, candidate) in p.iter().enumerate() {
            if !used[i] && candidate == stmt {
                used[i] = true;
                continue 'outer;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::build::*;

    fn params() -> MachineParams {
        MachineParams::default()
    }

    #[test]
    fn valid_chain() {
        let stmts = vec![
            atomic("Add", vec![v("a"), v("b")], &["c"]),
            atomic("Mult", vec![v("c"), v("d")], &["e"]),
        ];
        assert!(validate_program(stmts, &params()).is_ok());
    }

    #[test]
    fn duplicate_output() {
        let stmts = vec![
            atomic("Add", vec![v("a"), v("b")], &["c"]),
            atomic("Add", vec![v("d"), v("e")], &["c"]),
        ];
        assert_eq!(
            validate_program(stmts, &params()),
            Err(ValidityError::DuplicateOutput { name: var("c"), position: 1 })
        );
    }

    #[test]
    fn input_may_not_use_own_output() {
        let stmts = vec![atomic("Add", vec![v("c"), v("b")], &["c"])];
        assert_eq!(
            validate_program(stmts, &params()),
            Err(ValidityError::InputUsesLaterOutput { name: var("c"), position: 0 })
        );
    }

    #[test]
    fn input_may_not_use_later_output() {
        let stmts = vec![
            atomic("Int", vec![v("c")], &[]),
            atomic("Add", vec![v("a"), v("b")], &["c"]),
        ];
        assert!(matches!(
            validate_program(stmts, &params()),
            Err(ValidityError::InputUsesLaterOutput { position: 0, .. })
        ));
    }

    #[test]
    fn repeated_empty_output_statements_allowed() {
        let s = atomic("Lt", vec![v("a"), v("b")], &[]);
        assert!(validate_program(vec![s.clone(), s], &params()).is_ok());
    }

    #[test]
    fn list_limit() {
        let small = MachineParams::new(75, 256, 1, 100, 100).unwrap();
        let s = atomic("Lt", vec![v("a"), v("b")], &[]);
        assert!(matches!(
            validate_program(vec![s.clone(), s], &small),
            Err(ValidityError::ListTooLong { len: 2, max: 1 })
        ));
    }

    #[test]
    fn disjunction_operands_share_outputs() {
        let good = Statement::Disjunction(vec![
            prog(vec![atomic("Lt", vec![v("x"), int(0)], &[]), atomic("Mult", vec![int(-1), v("x")], &["y"])]),
            prog(vec![atomic("Le", vec![int(0), v("x")], &[]), atomic("Aid", vec![v("x")], &["y"])]),
        ]);
        assert!(validate_program(vec![good], &params()).is_ok());
        let bad = Statement::Disjunction(vec![
            prog(vec![atomic("Aid", vec![v("x")], &["y"])]),
            prog(vec![atomic("Aid", vec![v("x")], &["z"])]),
        ]);
        assert_eq!(
            validate_program(vec![bad], &params()),
            Err(ValidityError::OperandOutputsDiffer { position: 0 })
        );
    }

    #[test]
    fn program_constant_only_at_higher_level() {
        let s = atomic("Add", vec![InTerm::Ep, v("b")], &["c"]);
        assert!(matches!(
            validate_program(vec![s], &params()),
            Err(ValidityError::MisplacedConstant { .. })
        ));
        let s = atomic("Conc", vec![v("p"), InTerm::Ep], &["s"]);
        assert!(validate_program(vec![s], &params()).is_ok());
    }

    #[test]
    fn concat_rejects_clash() {
        let p = prog(vec![atomic("Add", vec![v("a"), v("b")], &["c"])]);
        let q = prog(vec![atomic("Add", vec![v("d"), v("e")], &["c"])]);
        assert!(concat(&p, &q, &params()).is_err());
        assert_eq!(concat(&p, &Program::empty(), &params()).unwrap(), p);
    }

    #[test]
    fn sublists_need_distinct_indices() {
        let eq = atomic("Eq", vec![v("a"), v("b")], &[]);
        let lt = atomic("Lt", vec![v("x"), v("y")], &[]);
        let p = prog(vec![lt.clone(), eq.clone()]);
        assert!(is_sublist(&prog(vec![eq.clone()]), &p));
        assert!(is_sublist(&prog(vec![eq.clone(), lt]), &p));
        assert!(is_sublist(&Program::empty(), &p));
        assert!(!is_sublist(&prog(vec![eq.clone(), eq.clone()]), &prog(vec![eq])));
    }
}
