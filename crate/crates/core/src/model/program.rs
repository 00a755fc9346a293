use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::names::{is_higher_order, ProgName, VarName};

/// One of the distinguished integer constants `-1`, `0`, `1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct IntConst(i8);

impl IntConst {
    pub const MINUS_ONE: IntConst = IntConst(-1);
    pub const ZERO: IntConst = IntConst(0);
    pub const ONE: IntConst = IntConst(1);

    pub fn value(self) -> i64 {
        self.0 as i64
    }
}

impl TryFrom<i64> for IntConst {
    type Error = String;
    fn try_from(value: i64) -> Result<Self, Self::Error> {
        match value {
            -1..=1 => Ok(IntConst(value as i8)),
            _ => Err(format!("{value} is not one of the constants -1, 0, 1")),
        }
    }
}

impl From<IntConst> for i64 {
    fn from(value: IntConst) -> Self {
        value.value()
    }
}

/// An element of an input list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum InTerm {
    Var(VarName),
    Int(IntConst),
    /// The empty program constant `ep`.
    Ep,
    /// A program literal; only meaningful in higher order statements.
    Prog(Program),
}

impl InTerm {
    pub fn var(&self) -> Option<&VarName> {
        match self {
            InTerm::Var(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        !matches!(self, InTerm::Var(_))
    }
}

impl From<VarName> for InTerm {
    fn from(value: VarName) -> Self {
        InTerm::Var(value)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Atomic {
    pub name: ProgName,
    pub inputs: Vec<InTerm>,
    pub outputs: Vec<VarName>,
}

impl Atomic {
    pub fn new(name: ProgName, inputs: Vec<InTerm>, outputs: Vec<VarName>) -> Self {
        Atomic { name, inputs, outputs }
    }

    pub fn is_higher_order(&self) -> bool {
        is_higher_order(self.name.as_str())
    }
}

/// An element of a program list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Statement {
    Atomic(Atomic),
    /// Operand programs joined by `|`; a single list element, never spliced
    /// into the host list.
    Disjunction(Vec<Program>),
}

impl Statement {
    pub fn atomic(&self) -> Option<&Atomic> {
        match self {
            Statement::Atomic(a) => Some(a),
            Statement::Disjunction(_) => None,
        }
    }

    pub fn name(&self) -> Option<&str> {
        self.atomic().map(|a| a.name.as_str())
    }

    /// Output names contributed to the host list. Disjunction operands share
    /// their outputs, so the first operand speaks for all of them.
    pub fn outputs(&self) -> Vec<VarName> {
        match self {
            Statement::Atomic(a) => a.outputs.clone(),
            Statement::Disjunction(ops) => ops.first().map(|p| p.main_io().1).unwrap_or_default(),
        }
    }

    /// Input terms with the operand convention applied for disjunctions.
    pub fn inputs(&self) -> Vec<InTerm> {
        match self {
            Statement::Atomic(a) => a.inputs.clone(),
            Statement::Disjunction(ops) => {
                let outputs = self.outputs();
                let mut seen = Vec::new();
                for op in ops {
                    for term in op.main_io().0 {
                        if !seen.contains(&term) {
                            seen.push(term);
                        }
                    }
                }
                seen.retain(|t| t.var().is_none_or(|v| !outputs.contains(v)));
                seen
            }
        }
    }

    /// Every variable name mentioned anywhere in the statement.
    pub fn collect_vars(&self, into: &mut BTreeSet<VarName>) {
        match self {
            Statement::Atomic(a) => {
                for t in &a.inputs {
                    match t {
                        InTerm::Var(v) => {
                            into.insert(v.clone());
                        }
                        InTerm::Prog(p) => p.collect_vars(into),
                        _ => {}
                    }
                }
                into.extend(a.outputs.iter().cloned());
            }
            Statement::Disjunction(ops) => ops.iter().for_each(|p| p.collect_vars(into)),
        }
    }

    /// True when every atomic statement (recursively) is integer-level.
    pub fn is_integer_level(&self) -> bool {
        match self {
            Statement::Atomic(a) => {
                !a.is_higher_order() && a.inputs.iter().all(|t| matches!(t, InTerm::Var(_) | InTerm::Int(_)))
            }
            Statement::Disjunction(ops) => ops.iter().all(Program::is_integer_level),
        }
    }
}

impl From<Atomic> for Statement {
    fn from(value: Atomic) -> Self {
        Statement::Atomic(value)
    }
}

/// A list of statements. Values obtained through [`super::validate_program`]
/// satisfy the structural conditions on I/O lists.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Program {
    stmts: Vec<Statement>,
}

impl Program {
    pub fn empty() -> Self {
        Program { stmts: Vec::new() }
    }

    /// Wrap statements without checking them; callers validate separately.
    pub(crate) fn raw(stmts: Vec<Statement>) -> Self {
        Program { stmts }
    }

    pub fn statements(&self) -> &[Statement] {
        &self.stmts
    }

    pub fn into_statements(self) -> Vec<Statement> {
        self.stmts
    }

    pub fn len(&self) -> usize {
        self.stmts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stmts.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Statement> {
        self.stmts.iter()
    }

    pub fn collect_vars(&self, into: &mut BTreeSet<VarName>) {
        self.stmts.iter().for_each(|s| s.collect_vars(into));
    }

    pub fn vars(&self) -> BTreeSet<VarName> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn is_integer_level(&self) -> bool {
        self.stmts.iter().all(Statement::is_integer_level)
    }

    /// Main-program input and output lists.
    ///
    /// Outputs are the concatenation of every element's outputs. Inputs are
    /// the concatenated input terms with repeats dropped (first occurrence
    /// kept) and anything naming an output removed.
    pub fn main_io(&self) -> (Vec<InTerm>, Vec<VarName>) {
        let outputs: Vec<VarName> = self.stmts.iter().flat_map(Statement::outputs).collect();
        let mut inputs: Vec<InTerm> = Vec::new();
        for stmt in &self.stmts {
            for term in stmt.inputs() {
                if !inputs.contains(&term) {
                    inputs.push(term);
                }
            }
        }
        inputs.retain(|t| t.var().is_none_or(|v| !outputs.contains(v)));
        (inputs, outputs)
    }
}

impl<'a> IntoIterator for &'a Program {
    type Item = &'a Statement;
    type IntoIter = std::slice::Iter<'a, Statement>;
    fn into_iter(self) -> Self::IntoIter {
        self.stmts.iter()
    }
}
