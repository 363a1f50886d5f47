//! Value types for technologies, fuels, the hydrogen project, weather,
//! demand and policy, plus their validation and loading.
//!
//! Units: power MW, energy MWh, hydrogen tonnes (rates t/h), money $
//! (annualized costs $/unit/yr), fuel MMBtu, emissions tCO2.

mod case;
pub mod defaults;
mod finance;
pub mod io;
mod policy;
mod tech;

use std::path::{Path, PathBuf};

pub use case::{validate_case, DemandProfile, SystemCase, Violation, WeatherScenario, HOURS_PER_YEAR};
pub use finance::annuitize;
pub use io::{load_case, CaseFile};
pub use policy::{Penalties, PolicyConfig, TmrKind};
pub use tech::{FuelSpec, H2ProjectSpec, TechKind, TechnologySpec};

#[derive(Debug, thiserror::Error)]
pub enum DomainError {
    #[error("{0}")]
    InvalidInput(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {msg}", path.display())]
    Config { path: PathBuf, msg: String },
    #[error("{}:{line}: {msg}", path.display())]
    Csv { path: PathBuf, line: u64, msg: String },
}

impl DomainError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        DomainError::Io { path: path.to_path_buf(), source }
    }
}
