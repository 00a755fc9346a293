use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NameError {
    #[error("empty name")]
    Empty,
    #[error("name `{0}` must start with a letter and contain only letters and digits")]
    NotAlphanumeric(String),
    #[error("program name `{0}` must start with an upper case letter followed by lower case letters or digits")]
    BadProgramName(String),
}

fn check_alphanumeric(text: &str) -> Result<(), NameError> {
    let mut chars = text.chars();
    match chars.next() {
        None => Err(NameError::Empty),
        Some(c) if c.is_ascii_alphabetic() && chars.all(|c| c.is_ascii_alphanumeric()) => Ok(()),
        Some(_) => Err(NameError::NotAlphanumeric(text.to_string())),
    }
}

/// Variable name of an I/O list element: a letter followed by letters or digits.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct VarName(String);

impl VarName {
    pub fn new(text: impl Into<String>) -> Result<Self, NameError> {
        let text = text.into();
        check_alphanumeric(&text)?;
        Ok(VarName(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl TryFrom<String> for VarName {
    type Error = NameError;
    fn try_from(value: String) -> Result<Self, Self::Error> {
        VarName::new(value)
    }
}

impl From<VarName> for String {
    fn from(value: VarName) -> Self {
        value.0
    }
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Program name: upper case letter, then lower case letters or digits.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ProgName(String);

impl ProgName {
    pub fn new(text: impl Into<String>) -> Result<Self, NameError> {
        let text = text.into();
        check_alphanumeric(&text)?;
        let mut chars = text.chars();
        let first = chars.next().unwrap_or('a');
        if !first.is_ascii_uppercase() || chars.any(|c| c.is_ascii_uppercase()) {
            return Err(NameError::BadProgramName(text));
        }
        Ok(ProgName(text))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for ProgName {
    type Error = NameError;
    fn try_from(value: String) -> Result<Self, Self::Error> {
        ProgName::new(value)
    }
}

impl From<ProgName> for String {
    fn from(value: ProgName) -> Self {
        value.0
    }
}

impl fmt::Display for ProgName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Names of the higher order atomic programs; every other name is an
/// integer-level program.
pub const HIGHER_ORDER_PROGRAMS: &[&str] = &[
    "Prog", "Equiv", "Eqio", "Sub", "Cpe", "False", "Conc", "Disj", "Acpe", "Afalse", "Sd",
];

/// Whether a statement name belongs to the higher order (program-valued) level.
pub fn is_higher_order(name: &str) -> bool {
    HIGHER_ORDER_PROGRAMS.contains(&name)
}

/// Deterministic supply of fresh variable names: `a`..`z`, then `a1`..`z1`,
/// `a2`.. skipping anything the caller reports as taken.
#[derive(Debug, Clone, Default)]
pub struct FreshNames {
    next: usize,
}

impl FreshNames {
    pub fn new() -> Self {
        FreshNames { next: 0 }
    }

    fn candidate(index: usize) -> VarName {
        let letter = (b'a' + (index % 26) as u8) as char;
        let round = index / 26;
        let text = if round == 0 {
            letter.to_string()
        } else {
            format!("{letter}{round}")
        };
        VarName(text)
    }

    /// Next name for which `taken` is false. The returned name is not handed
    /// out again by this generator.
    pub fn next_unused(&mut self, taken: impl Fn(&VarName) -> bool) -> VarName {
        loop {
            let name = Self::candidate(self.next);
            self.next += 1;
            if !taken(&name) {
                return name;
            }
        }
    }
}
