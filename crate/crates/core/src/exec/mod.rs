//! Execution of programs over bounded integers and program values, and the
//! brute-force computability oracle built on it.

mod oracle;

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

pub use oracle::{cpe_oracle, OracleError, OracleReport, DEFAULT_GRID_CAP};

use crate::model::{
    concat, equiv, expand_nonatomic, io_equivalent, is_sublist, is_sugar, validate_program, InTerm, Program, Statement,
    VarName,
};
use crate::params::MachineParams;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Int(i64),
    Prog(Program),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Prog(p) => write!(f, "{p}"),
        }
    }
}

/// Variable bindings. A name is bound at most once.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Env {
    bindings: BTreeMap<VarName, Value>,
}

impl Env {
    pub fn new() -> Self {
        Env::default()
    }

    pub fn get(&self, v: &VarName) -> Option<&Value> {
        self.bindings.get(v)
    }

    pub fn bind(&mut self, v: VarName, value: Value) -> Result<(), ExecError> {
        if self.bindings.contains_key(&v) {
            return Err(ExecError::Rebinding(v));
        }
        self.bindings.insert(v, value);
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarName, &Value)> {
        self.bindings.iter()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }
}

impl FromIterator<(VarName, Value)> for Env {
    fn from_iter<I: IntoIterator<Item = (VarName, Value)>>(iter: I) -> Self {
        Env { bindings: iter.into_iter().collect() }
    }
}

/// How an execution ended.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum ExecOutcome {
    /// Bindings created by the run.
    Ok { outputs: Env },
    TypeViolation { at: usize, detail: String },
    DisjunctionViolation { at: usize },
    Timeout,
}

impl ExecOutcome {
    pub fn is_ok(&self) -> bool {
        matches!(self, ExecOutcome::Ok { .. })
    }
}

/// Problems with the request itself rather than the program's behaviour.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExecError {
    #[error("no value bound to input `{0}`")]
    Unbound(VarName),
    #[error("`{0}` is bound twice")]
    Rebinding(VarName),
    #[error("{value} is outside -{n}..={n}")]
    OutOfRange { value: i64, n: i64 },
    #[error("`{name}` expects {inputs} inputs and {outputs} outputs")]
    Arity { name: String, inputs: usize, outputs: usize },
    #[error("`{0}` cannot be executed")]
    Unsupported(String),
    #[error("unknown program `{0}`")]
    UnknownProgram(String),
}

/// Result of a single atomic call that ran.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AtomicResult {
    Ok(Vec<Value>),
    Violation(String),
}

fn signature(name: &str) -> Option<(usize, usize)> {
    Some(match name {
        "Int" => (1, 0),
        "Lt" | "Eq" => (2, 0),
        "Aid" => (1, 1),
        "Add" | "Mult" | "Div" => (2, 1),
        "Prog" | "Afalse" => (1, 0),
        "Equiv" | "Eqio" | "Sub" | "Acpe" => (2, 0),
        "Conc" | "Disj" => (2, 1),
        "Cpe" | "False" | "Sd" => return None,
        _ => return None,
    })
}

fn bounded(v: i128, params: &MachineParams) -> Option<i64> {
    (v.unsigned_abs() <= params.n as u128).then_some(v as i64)
}

/// Run one atomic program on values.
pub fn exec_atomic(name: &str, inputs: &[Value], params: &MachineParams) -> Result<AtomicResult, ExecError> {
    let Some((n_in, n_out)) = signature(name) else {
        return Err(match name {
            "Cpe" | "False" | "Sd" => ExecError::Unsupported(name.to_string()),
            _ => ExecError::UnknownProgram(name.to_string()),
        });
    };
    if inputs.len() != n_in {
        return Err(ExecError::Arity { name: name.to_string(), inputs: n_in, outputs: n_out });
    }
    for v in inputs {
        if let Value::Int(i) = v {
            if i.unsigned_abs() > params.n as u64 {
                return Err(ExecError::OutOfRange { value: *i, n: params.n });
            }
        }
    }
    use AtomicResult::{Ok as Done, Violation};
    let ints = || -> Option<Vec<i128>> {
        inputs
            .iter()
            .map(|v| match v {
                Value::Int(i) => Some(*i as i128),
                Value::Prog(_) => None,
            })
            .collect()
    };
    let progs = || -> Option<Vec<&Program>> {
        inputs
            .iter()
            .map(|v| match v {
                Value::Prog(p) => Some(p),
                Value::Int(_) => None,
            })
            .collect()
    };
    let not_int = || Violation(format!("{name} needs integer inputs"));
    let not_prog = || Violation(format!("{name} needs program inputs"));
    let overflow = || Violation(format!("{name} result is outside -{}..={}", params.n, params.n));
    let is_program = |p: &Program| validate_program(p.statements().to_vec(), params).is_ok();
    let check = |ok: bool, what: &str| if ok { Done(vec![]) } else { Violation(what.to_string()) };
    Ok(match name {
        "Int" => match ints() {
            Some(_) => Done(vec![]),
            None => not_int(),
        },
        "Lt" => match ints() {
            Some(v) => check(v[0] < v[1], "first input is not less than the second"),
            None => not_int(),
        },
        "Eq" => match ints() {
            Some(v) => check(v[0] == v[1], "inputs differ"),
            None => not_int(),
        },
        "Aid" => match ints() {
            Some(v) => Done(vec![Value::Int(v[0] as i64)]),
            None => not_int(),
        },
        "Add" | "Mult" => match ints() {
            Some(v) => {
                let r = if name == "Add" { v[0] + v[1] } else { v[0] * v[1] };
                bounded(r, params).map_or_else(overflow, |r| Done(vec![Value::Int(r)]))
            }
            None => not_int(),
        },
        "Div" => match ints() {
            Some(v) if v[1] == 0 => Violation("division by zero".to_string()),
            Some(v) if v[0] % v[1] != 0 => Violation("division is not exact".to_string()),
            Some(v) => bounded(v[0] / v[1], params).map_or_else(overflow, |r| Done(vec![Value::Int(r)])),
            None => not_int(),
        },
        "Prog" | "Afalse" => match progs() {
            Some(p) => check(is_program(p[0]), "input is not a program"),
            None => not_prog(),
        },
        "Equiv" => match progs() {
            Some(p) => check(equiv(p[0], p[1]), "programs are not equivalent"),
            None => not_prog(),
        },
        "Eqio" => match progs() {
            Some(p) => check(io_equivalent(p[0], p[1]).is_ok(), "programs are not I/O equivalent"),
            None => not_prog(),
        },
        "Sub" => match progs() {
            Some(p) => check(is_sublist(p[0], p[1]), "first program is not a sublist of the second"),
            None => not_prog(),
        },
        "Acpe" => match progs() {
            Some(p) => check(
                is_program(p[0]) && is_program(p[1]) && concat(p[0], p[1], params).is_ok(),
                "inputs do not form a program extension",
            ),
            None => not_prog(),
        },
        "Conc" => match progs() {
            Some(p) => match concat(p[0], p[1], params) {
                Ok(r) => Done(vec![Value::Prog(r)]),
                Err(e) => Violation(e.to_string()),
            },
            None => not_prog(),
        },
        "Disj" => match progs() {
            Some(p) => match validate_program(vec![Statement::Disjunction(vec![p[0].clone(), p[1].clone()])], params) {
                Ok(r) => Done(vec![Value::Prog(r)]),
                Err(e) => Violation(e.to_string()),
            },
            None => not_prog(),
        },
        _ => unreachable!("signature covers every name"),
    })
}

fn term_value(t: &InTerm, env: &Env) -> Result<Value, ExecError> {
    match t {
        InTerm::Var(v) => env.get(v).cloned().ok_or_else(|| ExecError::Unbound(v.clone())),
        InTerm::Int(c) => Ok(Value::Int(c.value())),
        InTerm::Ep => Ok(Value::Prog(Program::empty())),
        InTerm::Prog(p) => Ok(Value::Prog(p.clone())),
    }
}

struct Run<'a> {
    params: &'a MachineParams,
    deadline: Instant,
}

enum Step {
    Done(Env),
    Failed(ExecOutcome),
}

impl Run<'_> {
    /// Execute `stmts` on top of `env`. `at` maps local positions to the
    /// top-level statement index used in reports.
    fn run(&self, stmts: &[Statement], mut env: Env, at: &dyn Fn(usize) -> usize) -> Result<Step, ExecError> {
        for (i, s) in stmts.iter().enumerate() {
            if Instant::now() > self.deadline {
                return Ok(Step::Failed(ExecOutcome::Timeout));
            }
            let s = if is_sugar(s) { expand_nonatomic(s) } else { s.clone() };
            match &s {
                Statement::Atomic(a) => {
                    let inputs = a.inputs.iter().map(|t| term_value(t, &env)).collect::<Result<Vec<_>, _>>()?;
                    match exec_atomic(a.name.as_str(), &inputs, self.params)? {
                        AtomicResult::Ok(values) => {
                            if values.len() != a.outputs.len() {
                                let (n_in, n_out) = signature(a.name.as_str()).unwrap_or((0, 0));
                                return Err(ExecError::Arity { name: a.name.to_string(), inputs: n_in, outputs: n_out });
                            }
                            for (o, v) in a.outputs.iter().zip(values) {
                                env.bind(o.clone(), v)?;
                            }
                        }
                        AtomicResult::Violation(detail) => {
                            return Ok(Step::Failed(ExecOutcome::TypeViolation {
                                at: at(i),
                                detail: format!("{}: {detail}", a.name),
                            }))
                        }
                    }
                }
                Statement::Disjunction(ops) => {
                    let here = at(i);
                    let rest = &stmts[i + 1..];
                    for op in ops {
                        let mut path = op.statements().to_vec();
                        path.extend(rest.iter().cloned());
                        let k = op.len();
                        let inner_at = move |j: usize| if j < k { here } else { at(i + 1 + j - k) };
                        match self.run(&path, env.clone(), &inner_at)? {
                            Step::Done(e) => return Ok(Step::Done(e)),
                            Step::Failed(ExecOutcome::Timeout) => return Ok(Step::Failed(ExecOutcome::Timeout)),
                            Step::Failed(_) => {}
                        }
                    }
                    return Ok(Step::Failed(ExecOutcome::DisjunctionViolation { at: here }));
                }
            }
        }
        Ok(Step::Done(env))
    }
}

/// Execute `p` with its inputs taken from `env`.
///
/// A disjunction succeeds when at least one operand, followed by the rest
/// of the program, runs to completion; the leftmost such operand supplies
/// the outputs.
pub fn exec_program(p: &Program, env: &Env, params: &MachineParams) -> Result<ExecOutcome, ExecError> {
    let (inputs, outputs) = p.main_io();
    for t in &inputs {
        if let InTerm::Var(v) = t {
            if env.get(v).is_none() {
                return Err(ExecError::Unbound(v.clone()));
            }
        }
    }
    for o in &outputs {
        if env.get(o).is_some() {
            return Err(ExecError::Rebinding(o.clone()));
        }
    }
    for (_, v) in env.iter() {
        if let Value::Int(i) = v {
            if i.unsigned_abs() > params.n as u64 {
                return Err(ExecError::OutOfRange { value: *i, n: params.n });
            }
        }
    }
    let run = Run { params, deadline: Instant::now() + Duration::from_millis(params.t_ms) };
    Ok(match run.run(p.statements(), env.clone(), &|i| i)? {
        Step::Done(after) => {
            let outputs = after.iter().filter(|(k, _)| env.get(k).is_none()).map(|(k, v)| (k.clone(), v.clone())).collect();
            ExecOutcome::Ok { outputs }
        }
        Step::Failed(o) => o,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::parse_program;
    use crate::model::build::var;

    fn params(n: i64) -> MachineParams {
        MachineParams::default().with_n(n).unwrap()
    }

    fn env(pairs: &[(&str, i64)]) -> Env {
        pairs.iter().map(|(k, v)| (var(k), Value::Int(*v))).collect()
    }

    fn ints(v: &[i64]) -> Vec<Value> {
        v.iter().map(|i| Value::Int(*i)).collect()
    }

    #[test]
    fn add_within_bound() {
        assert_eq!(exec_atomic("Add", &ints(&[2, 3]), &params(10)).unwrap(), AtomicResult::Ok(ints(&[5])));
        assert!(matches!(exec_atomic("Add", &ints(&[10, 1]), &params(10)).unwrap(), AtomicResult::Violation(_)));
    }

    #[test]
    fn div_rules() {
        let p = params(10);
        assert!(matches!(exec_atomic("Div", &ints(&[6, 0]), &p).unwrap(), AtomicResult::Violation(_)));
        assert!(matches!(exec_atomic("Div", &ints(&[7, 2]), &p).unwrap(), AtomicResult::Violation(_)));
        assert_eq!(exec_atomic("Div", &ints(&[-6, 3]), &p).unwrap(), AtomicResult::Ok(ints(&[-2])));
    }

    #[test]
    fn lt_failure_is_violation() {
        let p = parse_program("Lt([a,a],[])").unwrap();
        let out = exec_program(&p, &env(&[("a", 3)]), &params(10)).unwrap();
        assert!(matches!(out, ExecOutcome::TypeViolation { at: 0, .. }));
    }

    #[test]
    fn neq_both_operands_fail() {
        let p = parse_program("Neq([a,b],[])").unwrap();
        let out = exec_program(&p, &env(&[("a", 3), ("b", 3)]), &params(10)).unwrap();
        assert_eq!(out, ExecOutcome::DisjunctionViolation { at: 0 });
        assert!(exec_program(&p, &env(&[("a", 3), ("b", 4)]), &params(10)).unwrap().is_ok());
    }

    #[test]
    fn abs_takes_first_operand() {
        let p = parse_program("Abs([x,0,-1],[y])").unwrap();
        let out = exec_program(&p, &env(&[("x", -4)]), &params(10)).unwrap();
        assert_eq!(out, ExecOutcome::Ok { outputs: env(&[("y", 4)]) });
    }

    #[test]
    fn empty_program_runs() {
        assert_eq!(exec_program(&Program::empty(), &Env::new(), &params(10)).unwrap(), ExecOutcome::Ok { outputs: Env::new() });
    }

    #[test]
    fn suffix_decides_operand() {
        // The first operand passes on its own but the suffix then fails.
        let p = parse_program("[Lt([a,b],[])|Eq([a,a],[]), Eq([a,b],[])]").unwrap();
        assert!(exec_program(&p, &env(&[("a", 1), ("b", 1)]), &params(10)).unwrap().is_ok());
    }

    #[test]
    fn request_errors() {
        let p = parse_program("Add([a,b],[c])").unwrap();
        assert_eq!(exec_program(&p, &env(&[("a", 1)]), &params(10)), Err(ExecError::Unbound(var("b"))));
        assert!(matches!(exec_program(&p, &env(&[("a", 11), ("b", 0)]), &params(10)), Err(ExecError::OutOfRange { .. })));
        assert!(matches!(exec_atomic("Cpe", &[], &params(10)), Err(ExecError::Unsupported(_))));
    }

    #[test]
    fn higher_order_values() {
        let p = parse_program("Conc([[Add([a,b],[c])],ep],[s])").unwrap();
        let out = exec_program(&p, &Env::new(), &params(10)).unwrap();
        let ExecOutcome::Ok { outputs } = out else { panic!("{out:?}") };
        assert_eq!(outputs.get(&var("s")), Some(&Value::Prog(parse_program("Add([a,b],[c])").unwrap())));
        let clash = parse_program("Conc([[Add([a,b],[c])],[Add([d,e],[c])]],[s])").unwrap();
        assert!(matches!(exec_program(&clash, &Env::new(), &params(10)).unwrap(), ExecOutcome::TypeViolation { .. }));
    }
}
