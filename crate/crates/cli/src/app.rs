//! Loading the registry and machine parameters.

use std::path::{Path, PathBuf};

use vpc_core::formats::parse_config;
use vpc_core::registry::{Registry, RegistryError};
use vpc_core::MachineParams;

/// Environment variable naming the default registry file.
pub const AXIOMS_ENV: &str = "VPC_AXIOMS";

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("{path}: {message}")]
    File { path: String, message: String },
    #[error(transparent)]
    Registry(#[from] RegistryError),
    #[error("{0}")]
    Usage(String),
}

/// A registry with the file it was loaded from, if any. Without a file the
/// shipped seed is used and nothing is written back.
#[derive(Clone, Debug)]
pub struct Store {
    pub path: Option<PathBuf>,
    pub registry: Registry,
    pub params: MachineParams,
}

pub fn read_file(path: &Path) -> Result<String, AppError> {
    std::fs::read_to_string(path).map_err(|e| AppError::File { path: path.display().to_string(), message: e.to_string() })
}

pub fn load_params(path: Option<&Path>) -> Result<MachineParams, AppError> {
    match path {
        None => Ok(MachineParams::default()),
        Some(p) => parse_config(&read_file(p)?)
            .map_err(|e| AppError::File { path: p.display().to_string(), message: e.to_string() }),
    }
}

impl Store {
    /// `axioms` wins over the environment variable; with neither the seed
    /// store is loaded.
    pub fn open(axioms: Option<PathBuf>, params: MachineParams) -> Result<Self, AppError> {
        let path = axioms.or_else(|| std::env::var_os(AXIOMS_ENV).map(PathBuf::from));
        let registry = match &path {
            Some(p) => Registry::load(p, &params)?,
            None => Registry::seed(&params)?,
        };
        Ok(Store { path, registry, params })
    }

    pub fn save(&self) -> Result<(), AppError> {
        if let Some(p) = &self.path {
            self.registry.save(p)?;
        }
        Ok(())
    }
}
