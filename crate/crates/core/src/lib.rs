//! Derivation kernel for programs as formal statements.
//!
//! [`model`] holds the term language, [`exec`] runs programs over bounded
//! integers, [`registry`] stores axioms and theorems, [`rulebase`] handles
//! the schema axioms, [`engine`] builds and checks derivations and
//! [`formats`] owns every text grammar.

pub mod engine;
pub mod exec;
pub mod formats;
pub mod model;
pub mod params;
pub mod registry;
pub mod rulebase;

pub use params::MachineParams;
