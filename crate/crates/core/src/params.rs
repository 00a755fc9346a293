//! Machine parameters bounding every string, list, integer and execution.

use serde::{Deserialize, Serialize};

/// Limits of the machine a derivation is carried out on.
///
/// `k` is informational only (the alphabet is fixed by the grammar); the
/// remaining limits are enforced when names, programs and values are built.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MachineParams {
    /// Number of characters in the alphabet.
    pub k: u64,
    /// Maximum string length in characters.
    pub l: u64,
    /// Maximum number of elements in a list.
    pub m: u64,
    /// Largest integer magnitude.
    pub n: i64,
    /// Maximum wall time for a single program execution, in milliseconds.
    pub t_ms: u64,
}

impl MachineParams {
    /// 26 + 26 letters, 10 digits, 11 special characters, space and the
    /// tilde used in `[~]`.
    pub const DEFAULT_K: u64 = 75;
    pub const DEFAULT_L: u64 = 256;
    pub const DEFAULT_M: u64 = 4096;
    pub const DEFAULT_N: i64 = (1 << 31) - 1;
    pub const DEFAULT_T_MS: u64 = 5000;

    pub fn new(k: u64, l: u64, m: u64, n: i64, t_ms: u64) -> Result<Self, ParamsError> {
        let params = MachineParams { k, l, m, n, t_ms };
        params.check()?;
        Ok(params)
    }

    /// Same limits with a different integer bound.
    pub fn with_n(self, n: i64) -> Result<Self, ParamsError> {
        MachineParams { n, ..self }.check().map(|_| MachineParams { n, ..self })
    }

    pub fn check(&self) -> Result<(), ParamsError> {
        for (key, ok) in [
            ("K", self.k > 0),
            ("L", self.l > 0),
            ("M", self.m > 0),
            ("N", self.n > 0),
            ("T", self.t_ms > 0),
        ] {
            if !ok {
                return Err(ParamsError::NotPositive(key));
            }
        }
        Ok(())
    }
}

impl Default for MachineParams {
    fn default() -> Self {
        MachineParams {
            k: Self::DEFAULT_K,
            l: Self::DEFAULT_L,
            m: Self::DEFAULT_M,
            n: Self::DEFAULT_N,
            t_ms: Self::DEFAULT_T_MS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParamsError {
    #[error("machine parameter {0} must be strictly positive")]
    NotPositive(&'static str),
}
