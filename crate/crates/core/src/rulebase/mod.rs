//! Schema axioms that quantify over program names and lists: the I/O type
//! axioms (`A1`, `A2`, `CR9`, `CR10`) and the substitution axioms (`A3`,
//! `A4`, `CR11`, `CR12`).

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::model::{Atomic, FreshNames, InTerm, ProgName, Program, Statement, Substitution, VarName};
use crate::registry::SchemaForm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Level {
    Integer,
    Higher,
}

impl Level {
    /// Name of the equality program at this level.
    pub fn equality(self) -> &'static str {
        match self {
            Level::Integer => "Eq",
            Level::Higher => "Equiv",
        }
    }

    /// Name of the type assertion program at this level.
    pub fn type_program(self) -> &'static str {
        match self {
            Level::Integer => "Int",
            Level::Higher => "Prog",
        }
    }

    pub fn of(a: &Atomic) -> Level {
        if a.is_higher_order() {
            Level::Higher
        } else {
            Level::Integer
        }
    }
}

/// Programs that substitution may not be applied to at the higher level.
pub const SUBSTITUTION_EXCLUDED: &[&str] = &["Cpe", "False", "Eqio"];

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SchemaError {
    #[error("lists have lengths {0} and {1}")]
    LengthMismatch(usize, usize),
    #[error("empty list")]
    Empty,
    #[error("`{0}` is not an element of the line")]
    NotAnElement(String),
    #[error("line is not an atomic statement")]
    NotAtomic,
    #[error("line is at the wrong level for this schema")]
    WrongLevel,
    #[error("substitution does not apply to `{0}`")]
    Excluded(String),
    #[error("expected {expected} cited lines, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("line {0} is not an equality on the matching input")]
    BadEquality(usize),
    #[error("the primed line does not use the substituted inputs")]
    BadPrimed,
    #[error("the statement has no outputs to compare")]
    NoOutputs,
}

/// A schema instance: which lines it used and what it concludes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemaMatch {
    pub form: SchemaForm,
    /// Positions of the cited lines within the slice handed in.
    pub cited: Vec<usize>,
    pub conclusion: Vec<Statement>,
    /// Template variables of the schema (`x`, `y` positions) mapped to the
    /// candidate terms.
    pub substitution: Substitution,
    /// Output names invented for the conclusion.
    pub fresh: Vec<VarName>,
}

/// `[u1,v1,u2,v2,...]`.
pub fn interleave<T: Clone>(u: &[T], v: &[T]) -> Result<Vec<T>, SchemaError> {
    if u.len() != v.len() {
        return Err(SchemaError::LengthMismatch(u.len(), v.len()));
    }
    Ok(u.iter().zip(v).flat_map(|(a, b)| [a.clone(), b.clone()]).collect())
}

fn call(name: &str, inputs: Vec<InTerm>, outputs: Vec<VarName>) -> Statement {
    Statement::Atomic(Atomic::new(ProgName::new(name).expect("built-in name"), inputs, outputs))
}

/// The list of pairwise equalities `Eq([u_i,v_i],[])` (or `Equiv` at the
/// higher level). A single pair gives a one statement program.
pub fn expand_eqlst(u: &[InTerm], v: &[InTerm], level: Level) -> Result<Program, SchemaError> {
    if u.is_empty() && v.is_empty() {
        return Err(SchemaError::Empty);
    }
    let pairs = interleave(u, v)?;
    Ok(crate::model::build::prog(
        pairs.chunks(2).map(|p| call(level.equality(), p.to_vec(), vec![])).collect(),
    ))
}

fn atomic_at(line: &Statement, level: Level) -> Result<&Atomic, SchemaError> {
    let a = line.atomic().ok_or(SchemaError::NotAtomic)?;
    if Level::of(a) != level || (level == Level::Integer && !line.is_integer_level()) {
        return Err(SchemaError::WrongLevel);
    }
    Ok(a)
}

/// `[P(x,y), Int([c],[])]` for `c` in `x` or `y`; `Prog` at the higher level.
pub fn match_io_type(line: &Statement, element: &InTerm, level: Level) -> Result<SchemaMatch, SchemaError> {
    let a = atomic_at(line, level)?;
    let form = if a.inputs.contains(element) {
        if level == Level::Integer { SchemaForm::IntInput } else { SchemaForm::ProgInput }
    } else if element.var().is_some_and(|v| a.outputs.contains(v)) {
        if level == Level::Integer { SchemaForm::IntOutput } else { SchemaForm::ProgOutput }
    } else {
        return Err(SchemaError::NotAnElement(element.to_string()));
    };
    Ok(SchemaMatch {
        form,
        cited: vec![0],
        conclusion: vec![call(level.type_program(), vec![element.clone()], vec![])],
        substitution: Substitution::new(),
        fresh: vec![],
    })
}

fn check_target(a: &Atomic, level: Level) -> Result<(), SchemaError> {
    if level == Level::Higher && SUBSTITUTION_EXCLUDED.contains(&a.name.as_str()) {
        return Err(SchemaError::Excluded(a.name.to_string()));
    }
    if a.inputs.is_empty() {
        return Err(SchemaError::Empty);
    }
    Ok(())
}

/// Replacement inputs read off the equality lines, one per input position:
/// the line for position `i` must be `Eq([x_i, t_i],[])`.
fn replacement_inputs(a: &Atomic, equalities: &[&Statement], level: Level) -> Result<Vec<InTerm>, SchemaError> {
    if equalities.len() != a.inputs.len() {
        return Err(SchemaError::Arity { expected: a.inputs.len() + 1, found: equalities.len() + 1 });
    }
    a.inputs
        .iter()
        .zip(equalities)
        .enumerate()
        .map(|(i, (x, e))| match e.atomic() {
            Some(eq) if eq.name.as_str() == level.equality() && eq.inputs.len() == 2 && eq.outputs.is_empty() && eq.inputs[0] == *x => {
                Ok(eq.inputs[1].clone())
            }
            _ => Err(SchemaError::BadEquality(i + 1)),
        })
        .collect()
}

fn io_substitution(a: &Atomic, new_inputs: &[InTerm], new_outputs: &[VarName]) -> Substitution {
    let mut sub = Substitution::new();
    for (k, (old, new)) in a.inputs.iter().zip(new_inputs).enumerate() {
        sub.insert(VarName::new(format!("x{}", k + 1)).expect("schema name"), old.clone());
        sub.insert(VarName::new(format!("u{}", k + 1)).expect("schema name"), new.clone());
    }
    for (k, (old, new)) in a.outputs.iter().zip(new_outputs).enumerate() {
        sub.insert(VarName::new(format!("y{}", k + 1)).expect("schema name"), InTerm::Var(old.clone()));
        sub.insert(VarName::new(format!("v{}", k + 1)).expect("schema name"), InTerm::Var(new.clone()));
    }
    sub
}

/// `[P(x,y), Eqlst(<x,x'>)]` gives `P(x',y')` with fresh outputs `y'`
/// drawn from names not in `taken`.
pub fn match_substitution(
    target: &Statement,
    equalities: &[&Statement],
    level: Level,
    taken: &BTreeSet<VarName>,
) -> Result<SchemaMatch, SchemaError> {
    let a = atomic_at(target, level)?;
    check_target(a, level)?;
    let new_inputs = replacement_inputs(a, equalities, level)?;
    let mut fresh_gen = FreshNames::new();
    let mut fresh: Vec<VarName> = Vec::new();
    for _ in &a.outputs {
        let v = fresh_gen.next_unused(|v| taken.contains(v) || fresh.contains(v));
        fresh.push(v);
    }
    Ok(SchemaMatch {
        form: if level == Level::Integer { SchemaForm::IntSubst } else { SchemaForm::ProgSubst },
        cited: (0..=equalities.len()).collect(),
        conclusion: vec![Statement::Atomic(Atomic::new(a.name.clone(), new_inputs.clone(), fresh.clone()))],
        substitution: io_substitution(a, &new_inputs, &fresh),
        fresh,
    })
}

/// `[P(x,y), Eqlst(<x,x'>), P(x',y')]` gives `Eqlst(<y,y'>)`.
pub fn match_substitution_eq(
    target: &Statement,
    equalities: &[&Statement],
    primed: &Statement,
    level: Level,
) -> Result<SchemaMatch, SchemaError> {
    let a = atomic_at(target, level)?;
    check_target(a, level)?;
    if a.outputs.is_empty() {
        return Err(SchemaError::NoOutputs);
    }
    let new_inputs = replacement_inputs(a, equalities, level)?;
    let p = primed.atomic().ok_or(SchemaError::BadPrimed)?;
    if p.name != a.name || p.inputs != new_inputs || p.outputs.len() != a.outputs.len() {
        return Err(SchemaError::BadPrimed);
    }
    let conclusion = a
        .outputs
        .iter()
        .zip(&p.outputs)
        .map(|(y, y2)| call(level.equality(), vec![InTerm::Var(y.clone()), InTerm::Var(y2.clone())], vec![]))
        .collect();
    Ok(SchemaMatch {
        form: if level == Level::Integer { SchemaForm::IntSubstEq } else { SchemaForm::ProgSubstEq },
        cited: (0..=equalities.len() + 1).collect(),
        conclusion,
        substitution: io_substitution(a, &new_inputs, &p.outputs),
        fresh: vec![],
    })
}

/// Level a schema form works at.
pub fn level_of(form: SchemaForm) -> Level {
    if form.higher_order() {
        Level::Higher
    } else {
        Level::Integer
    }
}

/// Every schema instance available over `lines`, for the forms listed.
/// Substitution instances are offered only when all equality lines they
/// need are already present.
pub fn schema_options(lines: &[&Statement], forms: &[SchemaForm], taken: &BTreeSet<VarName>) -> Vec<SchemaMatch> {
    let mut out = Vec::new();
    for &form in forms {
        let level = level_of(form);
        for (li, line) in lines.iter().enumerate() {
            let Ok(a) = atomic_at(line, level) else { continue };
            match form {
                SchemaForm::IntInput | SchemaForm::ProgInput => {
                    let mut seen = Vec::new();
                    for t in &a.inputs {
                        if !seen.contains(t) {
                            seen.push(t.clone());
                            if let Ok(mut m) = match_io_type(line, t, level) {
                                m.cited = vec![li];
                                out.push(m);
                            }
                        }
                    }
                }
                SchemaForm::IntOutput | SchemaForm::ProgOutput => {
                    for o in &a.outputs {
                        if let Ok(mut m) = match_io_type(line, &InTerm::Var(o.clone()), level) {
                            m.cited = vec![li];
                            out.push(m);
                        }
                    }
                }
                SchemaForm::IntSubst | SchemaForm::ProgSubst | SchemaForm::IntSubstEq | SchemaForm::ProgSubstEq => {
                    if check_target(a, level).is_err() {
                        continue;
                    }
                    let per_position: Vec<Vec<usize>> = a
                        .inputs
                        .iter()
                        .map(|x| {
                            lines
                                .iter()
                                .enumerate()
                                .filter(|(_, e)| {
                                    e.atomic().is_some_and(|eq| {
                                        eq.name.as_str() == level.equality()
                                            && eq.inputs.len() == 2
                                            && eq.outputs.is_empty()
                                            && eq.inputs[0] == *x
                                    })
                                })
                                .map(|(i, _)| i)
                                .collect()
                        })
                        .collect();
                    for combo in cartesian(&per_position) {
                        let eqs: Vec<&Statement> = combo.iter().map(|&i| lines[i]).collect();
                        let mut cited = vec![li];
                        cited.extend(&combo);
                        if matches!(form, SchemaForm::IntSubst | SchemaForm::ProgSubst) {
                            if let Ok(mut m) = match_substitution(line, &eqs, level, taken) {
                                m.cited = cited;
                                out.push(m);
                            }
                        } else {
                            for (pi, primed) in lines.iter().enumerate() {
                                if let Ok(mut m) = match_substitution_eq(line, &eqs, primed, level) {
                                    let mut c = cited.clone();
                                    c.push(pi);
                                    m.cited = c;
                                    out.push(m);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn cartesian(sets: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut acc: Vec<Vec<usize>> = vec![vec![]];
    for s in sets {
        let mut next = Vec::with_capacity(acc.len() * s.len());
        for prefix in &acc {
            for &x in s {
                let mut p = prefix.clone();
                p.push(x);
                next.push(p);
            }
        }
        acc = next;
    }
    acc
}

/// Check a printed schema application. `cited` are the statements named by
/// the connection list in order; `printed` is the derived statement and
/// `taken` the variables of the earlier lines.
pub fn verify_schema(
    form: SchemaForm,
    cited: &[&Statement],
    printed: &Statement,
    taken: &BTreeSet<VarName>,
) -> Result<(), String> {
    let level = level_of(form);
    let first = *cited.first().ok_or("no cited lines")?;
    match form {
        SchemaForm::IntInput | SchemaForm::ProgInput | SchemaForm::IntOutput | SchemaForm::ProgOutput => {
            if cited.len() != 1 {
                return Err(format!("expected one cited line, found {}", cited.len()));
            }
            let element = printed
                .atomic()
                .filter(|p| p.name.as_str() == level.type_program() && p.inputs.len() == 1 && p.outputs.is_empty())
                .map(|p| p.inputs[0].clone())
                .ok_or_else(|| format!("expected `{}([c],[])`", level.type_program()))?;
            let m = match_io_type(first, &element, level).map_err(|e| e.to_string())?;
            let wants_input = matches!(form, SchemaForm::IntInput | SchemaForm::ProgInput);
            if wants_input != matches!(m.form, SchemaForm::IntInput | SchemaForm::ProgInput) {
                return Err(format!("`{element}` is not {} of the cited line", if wants_input { "an input" } else { "an output" }));
            }
            Ok(())
        }
        SchemaForm::IntSubst | SchemaForm::ProgSubst => {
            let m = match_substitution(first, &cited[1..], level, taken).map_err(|e| e.to_string())?;
            let (expected, got) = (m.conclusion[0].atomic().expect("atomic"), printed.atomic().ok_or("expected an atomic statement")?);
            if expected.name != got.name || expected.inputs != got.inputs || expected.outputs.len() != got.outputs.len() {
                return Err(format!("expected `{}` up to output names", m.conclusion[0]));
            }
            let mut seen = BTreeSet::new();
            for o in &got.outputs {
                if taken.contains(o) || !seen.insert(o.clone()) {
                    return Err(format!("output `{o}` is not a fresh name"));
                }
            }
            Ok(())
        }
        SchemaForm::IntSubstEq | SchemaForm::ProgSubstEq => {
            if cited.len() < 2 {
                return Err("missing the primed line".to_string());
            }
            let (eqs, primed) = cited[1..].split_at(cited.len() - 2);
            let m = match_substitution_eq(first, eqs, primed[0], level).map_err(|e| e.to_string())?;
            if m.conclusion.contains(printed) {
                Ok(())
            } else {
                Err(format!("expected `{}`", m.conclusion[0]))
            }
        }
    }
}
