//! A derivation with its undo history.

use vpc_core::engine::{extract_theorem, DerivOption, Derivation, EngineError, ExtractConfig, Extracted, Target};
use vpc_core::model::Statement;
use vpc_core::registry::{EntryKind, Registry};
use vpc_core::MachineParams;

#[derive(Clone, Debug)]
pub struct Session {
    pub derivation: Derivation,
    history: Vec<Derivation>,
}

impl Session {
    pub fn new(premises: Vec<Statement>, params: &MachineParams) -> Result<Self, EngineError> {
        Ok(Session { derivation: Derivation::new(premises, params)?, history: Vec::new() })
    }

    pub fn options(&self, target: Target, registry: &Registry, params: &MachineParams) -> Result<Vec<DerivOption>, EngineError> {
        self.derivation.generate_options(target, registry, params)
    }

    /// Run `f` on a copy and keep the result only if it succeeds.
    fn mutate<T>(&mut self, f: impl FnOnce(&mut Derivation) -> Result<T, EngineError>) -> Result<T, EngineError> {
        let mut next = self.derivation.clone();
        let out = f(&mut next)?;
        self.history.push(std::mem::replace(&mut self.derivation, next));
        Ok(out)
    }

    pub fn apply(&mut self, opt: &DerivOption, source: usize, params: &MachineParams) -> Result<(), EngineError> {
        self.mutate(|d| d.apply_option(opt, source, params))
    }

    pub fn split(&mut self, label: usize, params: &MachineParams) -> Result<(), EngineError> {
        self.mutate(|d| d.split_at(label, params))
    }

    pub fn contract(&mut self, goal: Option<&Statement>, params: &MachineParams) -> Result<(), EngineError> {
        self.mutate(|d| d.contract(goal, params))
    }

    pub fn extract(&mut self, kind: EntryKind, id: &str, registry: &Registry, params: &MachineParams) -> Result<Extracted, EngineError> {
        let x = extract_theorem(&self.derivation, kind, id, registry, params, &ExtractConfig::default())?;
        self.mutate(|d| {
            d.mark_extracted();
            Ok(())
        })?;
        Ok(x)
    }

    /// Step back one mutation. Returns false when there is nothing to undo.
    pub fn undo(&mut self) -> bool {
        match self.history.pop() {
            Some(prev) => {
                self.derivation = prev;
                true
            }
            None => false,
        }
    }

    pub fn history_len(&self) -> usize {
        self.history.len()
    }
}
