//! Derivation engine: option generation, replay and checking of proof
//! listings, splits and contraction, theorem extraction.

mod check;
mod derivation;
mod extract;
mod matcher;
mod options;
mod saturate;
mod script;

pub use check::{check_proof, CheckReport, LineCheck};
pub use derivation::{
    branch_to_main, reconstruct_branches, same_up_to_outputs, ActiveSplit, Branch, DerivLine, Derivation, Justification,
    LineSet, Status, Target,
};
pub use extract::{extract_theorem, reachable, ExtractConfig, Extracted};
pub use matcher::{contains_instance, match_statement_all, sublist_matches};
pub use options::{DerivOption, OptionKind, OptionSource};
pub use saturate::{saturate, SaturateConfig};
pub use script::to_script;

use crate::model::ValidityError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error(transparent)]
    Invalid(#[from] ValidityError),
    #[error("step rejected: {0}")]
    Rejected(String),
    #[error("the derivation has concluded `False`")]
    Concluded,
    #[error("the derivation has already been extracted")]
    Extracted,
    #[error("a split is active; work in its branches or contract first")]
    SplitActive,
    #[error("no split is active")]
    NoSplit,
    #[error("no branch {0}")]
    UnknownBranch(usize),
    #[error("no line {0}")]
    UnknownLabel(usize),
    #[error("line {0} is not a disjunction")]
    NotDisjunction(usize),
    #[error("the branches have no common conclusion")]
    NoCommonConclusion,
    #[error("the option was generated for an earlier state")]
    StaleOption,
    #[error("the option has no source {0}")]
    UnknownSource(usize),
    #[error("nothing has been derived")]
    NothingDerived,
    #[error("the last line is a premise, not a derived statement")]
    LastLineNotDerived,
    #[error("`False` is still reached without premise {0}")]
    NotMinimal(String),
    #[error("saturation depth must be positive")]
    ZeroDepth,
}
