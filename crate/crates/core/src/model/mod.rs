//! Static term language: names, statements, programs and the relations
//! defined on them.

mod equiv;
mod ioequiv;
mod names;
mod program;
mod split;
mod sugar;
mod validate;

pub use equiv::{canonical_form, equiv, equiv_step, CanonicalForm};
pub use ioequiv::{io_equivalent, match_program_in_order, match_statement, MatchFailure, Substitution};
pub use names::{is_higher_order, FreshNames, NameError, ProgName, VarName, HIGHER_ORDER_PROGRAMS};
pub use program::{Atomic, InTerm, IntConst, Program, Statement};
pub use split::{operands_of, split_disjunction, SplitError};
pub use sugar::{expand_nonatomic, is_sugar, SUGAR_PROGRAMS};
pub use validate::{concat, is_sublist, validate_program, ValidityError};

/// Convenience constructors used by tests and seed data.
pub mod build {
    use super::*;

    pub fn var(name: &str) -> VarName {
        VarName::new(name).expect("valid variable name")
    }

    pub fn v(name: &str) -> InTerm {
        InTerm::Var(var(name))
    }

    pub fn int(value: i64) -> InTerm {
        InTerm::Int(IntConst::try_from(value).expect("constant in -1..=1"))
    }

    pub fn atomic(name: &str, inputs: Vec<InTerm>, outputs: &[&str]) -> Statement {
        Statement::Atomic(Atomic::new(
            ProgName::new(name).expect("valid program name"),
            inputs,
            outputs.iter().map(|o| var(o)).collect(),
        ))
    }

    /// Unchecked program; callers validate when it matters.
    pub fn prog(stmts: Vec<Statement>) -> Program {
        Program::raw(stmts)
    }
}
