use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::formats::{Conclusion, Header};
use crate::model::Program;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryKind {
    Axiom,
    Theorem,
    Lemma,
    ConstructionRule,
}

impl EntryKind {
    pub fn keyword(self) -> &'static str {
        match self {
            EntryKind::Axiom => "axiom",
            EntryKind::Theorem => "theorem",
            EntryKind::Lemma => "lemma",
            EntryKind::ConstructionRule => "crule",
        }
    }

    pub fn needs_proof(self) -> bool {
        matches!(self, EntryKind::Theorem | EntryKind::Lemma)
    }
}

/// Where a derived entry's proof lives.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProofRef {
    /// Taken over without a proof in this store.
    Imported,
    /// Name or path of a proof listing.
    Script(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CpeEntry {
    pub id: String,
    pub kind: EntryKind,
    pub premise: Program,
    pub conclusion: Program,
    pub deps: Vec<String>,
    pub proof: Option<ProofRef>,
}

impl CpeEntry {
    pub fn header(&self) -> Header {
        Header {
            premise: self.premise.statements().to_vec(),
            conclusion: Conclusion::Statements(self.conclusion.statements().to_vec()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FalseEntry {
    pub id: String,
    pub program: Program,
    pub deps: Vec<String>,
    pub proof: Option<ProofRef>,
}

impl FalseEntry {
    pub fn header(&self) -> Header {
        Header { premise: self.program.statements().to_vec(), conclusion: Conclusion::False }
    }
}

/// The axiom and rule schemas that quantify over program names and lists
/// and so cannot be stored as finite templates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemaForm {
    /// `[P(x,y), Int([c],[])]`, `c` in `x`.
    IntInput,
    /// `[P(x,y), Int([c],[])]`, `c` in `y`.
    IntOutput,
    /// Substitution existence with `Eq` lines.
    IntSubst,
    /// Substitution equality of outputs with `Eq` lines.
    IntSubstEq,
    ProgInput,
    ProgOutput,
    ProgSubst,
    ProgSubstEq,
}

impl SchemaForm {
    pub const ALL: [SchemaForm; 8] = [
        SchemaForm::IntInput,
        SchemaForm::IntOutput,
        SchemaForm::IntSubst,
        SchemaForm::IntSubstEq,
        SchemaForm::ProgInput,
        SchemaForm::ProgOutput,
        SchemaForm::ProgSubst,
        SchemaForm::ProgSubstEq,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            SchemaForm::IntInput => "int-input",
            SchemaForm::IntOutput => "int-output",
            SchemaForm::IntSubst => "int-subst",
            SchemaForm::IntSubstEq => "int-subst-eq",
            SchemaForm::ProgInput => "prog-input",
            SchemaForm::ProgOutput => "prog-output",
            SchemaForm::ProgSubst => "prog-subst",
            SchemaForm::ProgSubstEq => "prog-subst-eq",
        }
    }

    pub fn higher_order(self) -> bool {
        matches!(
            self,
            SchemaForm::ProgInput | SchemaForm::ProgOutput | SchemaForm::ProgSubst | SchemaForm::ProgSubstEq
        )
    }
}

impl fmt::Display for SchemaForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

impl FromStr for SchemaForm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SchemaForm::ALL
            .into_iter()
            .find(|f| f.keyword() == s)
            .ok_or_else(|| format!("unknown schema form `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemaEntry {
    pub id: String,
    pub form: SchemaForm,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Entry {
    Cpe(CpeEntry),
    False(FalseEntry),
    Schema(SchemaEntry),
}

impl Entry {
    pub fn id(&self) -> &str {
        match self {
            Entry::Cpe(e) => &e.id,
            Entry::False(e) => &e.id,
            Entry::Schema(e) => &e.id,
        }
    }

    pub fn deps(&self) -> &[String] {
        match self {
            Entry::Cpe(e) => &e.deps,
            Entry::False(e) => &e.deps,
            Entry::Schema(_) => &[],
        }
    }

    /// Number of premise statements a connection list citing this entry has.
    pub fn premise_len(&self) -> Option<usize> {
        match self {
            Entry::Cpe(e) => Some(e.premise.len()),
            Entry::False(e) => Some(e.program.len()),
            Entry::Schema(_) => None,
        }
    }
}
