//! The experiment grid: no-hydrogen baselines, deterministic and stochastic
//! designs, and out-of-sample dispatch of fixed designs.
//!
//! A manifest (TOML or JSON) holds a `[case]` template, optional
//! out-of-sample scenarios or a plant library to draw years from, `[solver]`
//! options and one `[[run]]` table per label. Results land in
//! `runs/<label>/{capacities.csv, dispatch.csv, duals.csv, report.json}`.

mod exec;
mod manifest;
mod output;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::analysis::{AnalysisError, CaseReport, Provenance, Robustness};
use crate::domain::{DomainError, Violation};
use crate::lp::{LpError, Status};
use crate::model::{Capacities, ModelError};
use crate::scenarios::ScenarioError;

pub use exec::{
    combined_provenance, execute, pooled_robustness, run_design, run_oos, DesignOutcome, DispatchOutcome, ExecOptions,
    RunSummary,
};
pub use manifest::{
    load_experiment, Backend, Experiment, LibraryConfig, Manifest, PolicyOverride, RunPlan, SolverConfig,
};
pub use output::{read_record, read_records, RECORD_FILE, RUN_FILES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunMode {
    /// The case without the hydrogen project and matching rules.
    Baseline,
    /// One scenario, weight 1.
    Deterministic,
    /// All selected scenarios weighted by probability.
    Stochastic,
    /// Dispatch of a prior design on each selected out-of-sample scenario.
    OosDispatch,
}

impl RunMode {
    /// Execution stage: baselines, then designs, then dispatch of designs.
    pub fn stage(self) -> usize {
        match self {
            RunMode::Baseline => 0,
            RunMode::Deterministic | RunMode::Stochastic => 1,
            RunMode::OosDispatch => 2,
        }
    }
}

/// Capacities of a solved design and the label that produced them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignSolution {
    pub label: String,
    pub capacities: Capacities,
}

/// Contents of `report.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub label: String,
    pub mode: RunMode,
    pub scenarios: Vec<String>,
    pub provenance: Provenance,
    /// Design label dispatched by an out-of-sample run.
    pub design: Option<String>,
    /// Report of a design or baseline solve.
    pub report: Option<CaseReport>,
    /// One report per out-of-sample scenario, labelled `<label>@<scenario>`.
    pub dispatch: Vec<CaseReport>,
    /// Pooled over every out-of-sample scenario.
    pub robustness: Option<Robustness>,
}

impl RunRecord {
    /// Every case report of the run in order.
    pub fn reports(&self) -> impl Iterator<Item = &CaseReport> {
        self.report.iter().chain(&self.dispatch)
    }

    pub fn design_solution(&self) -> Option<DesignSolution> {
        self.report.as_ref().map(|r| DesignSolution { label: self.label.clone(), capacities: r.capacities.clone() })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Config(String),
    #[error("{}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Validation(Vec<Violation>),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("{label}: {source}")]
    Model { label: String, source: ModelError },
    #[error("{label}: solver returned {status:?}; LP written to {}", .lp_path.display())]
    NotOptimal { label: String, status: Status, lp_path: PathBuf },
    #[error("{label}: solver failed: {source}")]
    Solver { label: String, source: LpError },
    #[error("{label}: {source}")]
    Analysis { label: String, source: AnalysisError },
    #[error("{label}: {msg}")]
    Dependency { label: String, msg: String },
    #[error("{}: {source}", .path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl RunError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        RunError::Io { path: path.into(), source }
    }

    /// Failures caused by the inputs rather than the solve or the disk.
    pub fn is_validation(&self) -> bool {
        match self {
            RunError::Config(_) | RunError::Validation(_) | RunError::Scenario(_) => true,
            RunError::Domain(e) => !matches!(e, DomainError::Io { .. }),
            RunError::Model { source, .. } => matches!(source, ModelError::Invalid(_)),
            _ => false,
        }
    }

    pub fn is_io(&self) -> bool {
        matches!(self, RunError::Io { .. } | RunError::Domain(DomainError::Io { .. }))
    }
}
