//! Brute-force check that a premise/conclusion pair behaves as a
//! computable program extension on a finite grid of inputs.

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use super::{exec_program, Env, ExecError, ExecOutcome, Value};
use crate::model::{concat, InTerm, Program, ValidityError, VarName};
use crate::params::MachineParams;

pub const DEFAULT_GRID_CAP: u64 = 5_000_000;
const KEPT_COUNTEREXAMPLES: usize = 20;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub variables: Vec<VarName>,
    pub points: u64,
    /// Points where the premise runs to completion.
    pub premise_computable: u64,
    /// Points where the premise runs but premise plus conclusion does not.
    pub counterexample_count: u64,
    /// The first few counterexamples.
    pub counterexamples: Vec<Vec<(VarName, i64)>>,
    pub timeouts: u64,
}

impl OracleReport {
    pub fn is_consistent(&self) -> bool {
        self.counterexample_count == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("the domain is empty")]
    EmptyDomain,
    #[error("domain {lo}..={hi} is outside -{n}..={n}")]
    DomainOutOfRange { lo: i64, hi: i64, n: i64 },
    #[error("{points} assignments exceed the cap of {cap}")]
    DomainTooLarge { points: u128, cap: u64 },
    #[error("the oracle only runs integer-level programs")]
    NotIntegerLevel,
    #[error("premise and conclusion do not form a program: {0}")]
    Invalid(#[from] ValidityError),
    #[error(transparent)]
    Exec(#[from] ExecError),
}

fn input_vars(p: &Program, into: &mut Vec<VarName>) {
    for t in p.main_io().0 {
        if let InTerm::Var(v) = t {
            if !into.contains(&v) {
                into.push(v);
            }
        }
    }
}

/// Try every assignment of `domain` values to the free inputs of the
/// premise and of premise plus conclusion.
pub fn cpe_oracle(
    premise: &Program,
    conclusion: &Program,
    domain: RangeInclusive<i64>,
    params: &MachineParams,
    cap: u64,
) -> Result<OracleReport, OracleError> {
    let (lo, hi) = (*domain.start(), *domain.end());
    if lo > hi {
        return Err(OracleError::EmptyDomain);
    }
    if lo.unsigned_abs() > params.n as u64 || hi.unsigned_abs() > params.n as u64 {
        return Err(OracleError::DomainOutOfRange { lo, hi, n: params.n });
    }
    if !premise.is_integer_level() || !conclusion.is_integer_level() {
        return Err(OracleError::NotIntegerLevel);
    }
    let whole = concat(premise, conclusion, params)?;
    let mut vars = Vec::new();
    input_vars(premise, &mut vars);
    input_vars(&whole, &mut vars);
    let width = (hi - lo + 1) as u128;
    let points = width.checked_pow(vars.len() as u32).unwrap_or(u128::MAX);
    if points > cap as u128 {
        return Err(OracleError::DomainTooLarge { points, cap });
    }
    let mut report = OracleReport { variables: vars.clone(), ..OracleReport::default() };
    let mut values = vec![lo; vars.len()];
    loop {
        let env: Env = vars.iter().cloned().zip(values.iter().map(|v| Value::Int(*v))).collect();
        report.points += 1;
        let pre_env: Env = env.iter().filter(|(k, _)| premise_mentions(premise, k)).map(|(k, v)| (k.clone(), v.clone())).collect();
        match exec_program(premise, &pre_env, params)? {
            ExecOutcome::Ok { .. } => {
                report.premise_computable += 1;
                match exec_program(&whole, &env, params)? {
                    ExecOutcome::Ok { .. } => {}
                    ExecOutcome::Timeout => report.timeouts += 1,
                    _ => {
                        report.counterexample_count += 1;
                        if report.counterexamples.len() < KEPT_COUNTEREXAMPLES {
                            report.counterexamples.push(vars.iter().cloned().zip(values.iter().copied()).collect());
                        }
                    }
                }
            }
            ExecOutcome::Timeout => report.timeouts += 1,
            _ => {}
        }
        // Odometer step.
        let mut k = 0;
        loop {
            if k == values.len() {
                return Ok(report);
            }
            if values[k] < hi {
                values[k] += 1;
                break;
            }
            values[k] = lo;
            k += 1;
        }
    }
}

fn premise_mentions(p: &Program, v: &VarName) -> bool {
    p.main_io().0.iter().any(|t| t.var() == Some(v))
}
