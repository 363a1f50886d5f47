//! Manifest parsing and the resolved experiment.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::{RunError, RunMode};
use crate::domain::io::{parse_config, ConfigFormat, ScenarioSource};
use crate::domain::{validate_case, CaseFile, PolicyConfig, SystemCase, Violation, WeatherScenario};
use crate::lp::SolveOptions;
use crate::scenarios::{kmeans_reduce, read_plants, sample_oos, ScenarioLibrary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    #[default]
    Embedded,
    /// Shells out on an MPS file; see `lp::external`.
    External,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub backend: Backend,
    /// Program and leading arguments; the MPS and solution paths are appended.
    pub command: Vec<String>,
    /// Declares that the external backend writes row duals.
    pub duals: bool,
    pub feas_tol: f64,
    pub opt_tol: f64,
    pub max_iterations: usize,
    /// Seeds scenario selection and is stamped into every output.
    pub seed: u64,
    /// Matching slack above this (MW) marks an hour as unmet.
    pub slack_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let d = SolveOptions::default();
        Self {
            backend: Backend::Embedded,
            command: Vec::new(),
            duals: false,
            feas_tol: d.feas_tol,
            opt_tol: d.opt_tol,
            max_iterations: d.max_iterations,
            seed: 0,
            slack_tol: 1e-6,
        }
    }
}

impl SolverConfig {
    pub fn options(&self) -> SolveOptions {
        SolveOptions {
            feas_tol: self.feas_tol,
            opt_tol: self.opt_tol,
            seed: self.seed,
            max_iterations: self.max_iterations,
        }
    }

    pub fn check(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut push = |field: &str, rule: &str| out.push(Violation { field: field.into(), rule: rule.into() });
        if self.backend == Backend::External {
            if self.command.is_empty() {
                push("solver.command", "external backend needs a command");
            }
            if !self.duals {
                push("solver.duals", "external backend must report row duals (set `duals = true` if it does)");
            }
        }
        if !(self.feas_tol > 0.0) || !(self.opt_tol > 0.0) {
            push("solver.feas_tol", "tolerances must be > 0");
        }
        if !(self.slack_tol >= 0.0) {
            push("solver.slack_tol", "must be >= 0");
        }
        out
    }
}

/// Weather years aggregated from plant records; design years are k-means
/// medoids and out-of-sample years a seeded sample of the rest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LibraryConfig {
    pub registry: PathBuf,
    pub generation: PathBuf,
    pub k: usize,
    #[serde(default)]
    pub oos: usize,
    #[serde(default = "default_feature")]
    pub feature_group: String,
}

fn default_feature() -> String {
    "new_wind".into()
}

/// Partial policy, merged key by key over the case policy. The string
/// `"none"` clears an optional number.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PolicyOverride(pub serde_json::Map<String, Value>);

impl PolicyOverride {
    pub fn apply(&self, base: &PolicyConfig) -> Result<PolicyConfig, String> {
        let mut v = serde_json::to_value(base).map_err(|e| e.to_string())?;
        merge(&mut v, &Value::Object(self.0.clone()));
        serde_json::from_value(v).map_err(|e| e.to_string())
    }
}

fn merge(base: &mut Value, over: &Value) {
    match (base, over) {
        (Value::Object(b), Value::Object(o)) => {
            for (k, ov) in o {
                let slot = b.entry(k.clone()).or_insert(Value::Null);
                let clears = ov.as_str() == Some("none") && (slot.is_number() || slot.is_null());
                if clears {
                    *slot = Value::Null;
                } else {
                    merge(slot, ov);
                }
            }
        }
        (b, o) => *b = o.clone(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunPlan {
    pub label: String,
    pub mode: RunMode,
    /// Scenario labels; designs default to every case scenario, dispatch
    /// runs to every out-of-sample scenario.
    #[serde(default)]
    pub scenarios: Option<Vec<String>>,
    #[serde(default)]
    pub policy: PolicyOverride,
    /// Caps hydrogen storage at this many hours of peak demand.
    #[serde(default)]
    pub h2_storage_hours: Option<f64>,
    /// Design label dispatched by an `oos_dispatch` run.
    #[serde(default)]
    pub design: Option<String>,
    /// Baseline label used for consequential emissions.
    #[serde(default)]
    pub baseline: Option<String>,
}

impl RunPlan {
    pub fn new(label: impl Into<String>, mode: RunMode) -> Self {
        Self {
            label: label.into(),
            mode,
            scenarios: None,
            policy: PolicyOverride::default(),
            h2_storage_hours: None,
            design: None,
            baseline: None,
        }
    }

    /// Labels this run needs results from.
    pub fn dependencies(&self) -> Vec<&str> {
        self.design.iter().chain(&self.baseline).map(String::as_str).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub case: CaseFile,
    #[serde(default)]
    pub oos_scenarios: Vec<ScenarioSource>,
    #[serde(default)]
    pub library: Option<LibraryConfig>,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(rename = "run")]
    pub runs: Vec<RunPlan>,
}

/// A manifest with every series loaded and scenario years selected.
#[derive(Debug, Clone)]
pub struct Experiment {
    /// Case template; its scenarios are the design set.
    pub case: SystemCase,
    pub oos_pool: Vec<WeatherScenario>,
    pub solver: SolverConfig,
    pub runs: Vec<RunPlan>,
    pub seed: u64,
    /// Hash of the resolved case, scenario pool, solver and run list.
    pub config_hash: String,
}

/// Reads a manifest; `seed` overrides `solver.seed`.
pub fn load_experiment(path: &Path, seed: Option<u64>) -> Result<Experiment, RunError> {
    let text = fs::read_to_string(path).map_err(|e| RunError::io(path, e))?;
    let manifest: Manifest = parse_config(&text, ConfigFormat::from_path(path), path)?;
    Experiment::from_manifest(manifest, path.parent().unwrap_or(Path::new(".")), seed)
}

pub(crate) fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn json_hash<T: Serialize>(v: &T) -> String {
    sha256_hex(&serde_json::to_vec(v).expect("plain data serializes"))
}

impl Experiment {
    pub fn from_manifest(m: Manifest, base: &Path, seed: Option<u64>) -> Result<Self, RunError> {
        let mut solver = m.solver;
        if let Some(s) = seed {
            solver.seed = s;
        }
        let mut case = m.case.resolve(base)?;
        let oos_file = CaseFile { scenarios: m.oos_scenarios, ..m.case };
        let mut oos_pool = if oos_file.scenarios.is_empty() { Vec::new() } else { oos_file.resolve(base)?.scenarios };
        if let Some(lib) = &m.library {
            if !case.scenarios.is_empty() || !oos_pool.is_empty() {
                return Err(RunError::Config(
                    "library: scenarios come from the plant library; leave case.scenarios and oos_scenarios empty"
                        .into(),
                ));
            }
            let at = |p: &Path| if p.is_absolute() { p.to_path_buf() } else { base.join(p) };
            let plants = read_plants(&at(&lib.registry), &at(&lib.generation))?;
            let mut library = ScenarioLibrary::from_plants(&plants)?;
            library.design_years = kmeans_reduce(&library, lib.k, solver.seed, &lib.feature_group)?;
            library.oos_years = sample_oos(&library, lib.oos, solver.seed)?;
            log::info!("design years {:?}, out-of-sample years {:?}", library.design_years, library.oos_years);
            case.scenarios = library.scenarios(&library.design_years)?;
            oos_pool = library.scenarios(&library.oos_years)?;
        }
        let seed = solver.seed;
        let config_hash = json_hash(&(&case, &oos_pool, &solver, &m.runs));
        Ok(Experiment { case, oos_pool, solver, runs: m.runs, seed, config_hash })
    }

    pub fn plan(&self, label: &str) -> Option<&RunPlan> {
        self.runs.iter().find(|p| p.label == label)
    }

    /// Scenarios a run solves, with weights renormalized over the selection.
    /// Dispatch runs solve each scenario on its own with weight 1.
    pub fn scenarios_for(&self, plan: &RunPlan) -> Result<Vec<WeatherScenario>, RunError> {
        let bad = |msg: String| RunError::Config(format!("run {}: {msg}", plan.label));
        let pool: Vec<&WeatherScenario> = match plan.mode {
            RunMode::OosDispatch => self.oos_pool.iter().chain(&self.case.scenarios).collect(),
            _ => self.case.scenarios.iter().collect(),
        };
        let picked: Vec<WeatherScenario> = match &plan.scenarios {
            None if plan.mode == RunMode::OosDispatch => self.oos_pool.clone(),
            None => self.case.scenarios.clone(),
            Some(names) => {
                let mut seen = BTreeSet::new();
                names
                    .iter()
                    .map(|n| {
                        if !seen.insert(n) {
                            return Err(bad(format!("scenario `{n}` listed twice")));
                        }
                        pool.iter()
                            .find(|s| &s.year_label == n)
                            .map(|s| (*s).clone())
                            .ok_or_else(|| bad(format!("unknown scenario `{n}`")))
                    })
                    .collect::<Result<_, _>>()?
            }
        };
        if picked.is_empty() {
            return Err(bad("no scenarios selected".into()));
        }
        let total: f64 = picked.iter().map(|s| s.weight).sum();
        if !(total > 0.0) {
            return Err(bad("selected scenario weights sum to zero".into()));
        }
        Ok(picked.into_iter().map(|s| WeatherScenario { weight: s.weight / total, ..s }).collect())
    }

    /// The case a run solves. Dispatch runs get the design's case with the
    /// selected out-of-sample scenarios in place of the design scenarios.
    pub fn case_for(&self, plan: &RunPlan) -> Result<SystemCase, RunError> {
        let mut case = self.case.clone();
        case.label = plan.label.clone();
        if plan.mode == RunMode::OosDispatch {
            let design = plan
                .design
                .as_deref()
                .and_then(|d| self.plan(d))
                .ok_or_else(|| RunError::Config(format!("run {}: needs a `design` run label", plan.label)))?;
            case = self.case_for(design)?;
            case.label = plan.label.clone();
        } else {
            case.policy = plan
                .policy
                .apply(&case.policy)
                .map_err(|e| RunError::Config(format!("run {}: policy: {e}", plan.label)))?;
            if let Some(h) = plan.h2_storage_hours {
                let peak = case.demand.h2_demand.iter().copied().fold(0.0, f64::max);
                let spec = case.h2_project.as_mut().ok_or_else(|| {
                    RunError::Config(format!("run {}: h2_storage_hours needs a hydrogen project", plan.label))
                })?;
                spec.h2_store_cap_limit = Some(h * peak);
            }
            if plan.mode == RunMode::Baseline {
                case = case.without_h2();
            }
        }
        case.scenarios = self.scenarios_for(plan)?;
        Ok(case)
    }

    /// Every problem with the manifest: plan structure, then each run's case.
    /// Case violations shared by every run are reported once.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = self.solver.check();
        let plan_err = |label: &str, rule: String| Violation { field: format!("run.{label}"), rule };
        let mut labels = BTreeMap::new();
        for p in &self.runs {
            if p.label.is_empty() || !p.label.chars().all(|c| c.is_ascii_alphanumeric() || "_.-".contains(c)) {
                out.push(plan_err(&p.label, "labels use letters, digits, `_`, `.` and `-` only".into()));
            }
            if labels.insert(p.label.as_str(), p).is_some() {
                out.push(plan_err(&p.label, "duplicate label".into()));
            }
        }
        for p in &self.runs {
            let wants = |dep: &Option<String>, field: &str, ok: &[RunMode]| -> Option<Violation> {
                let d = dep.as_deref()?;
                match labels.get(d) {
                    Some(q) if ok.contains(&q.mode) => None,
                    Some(_) => Some(plan_err(&p.label, format!("`{field}` run `{d}` has the wrong mode"))),
                    None => Some(plan_err(&p.label, format!("`{field}` names unknown run `{d}`"))),
                }
            };
            let designs = [RunMode::Deterministic, RunMode::Stochastic];
            out.extend(wants(&p.design, "design", &designs));
            out.extend(wants(&p.baseline, "baseline", &[RunMode::Baseline]));
            match p.mode {
                RunMode::OosDispatch if p.design.is_none() => {
                    out.push(plan_err(&p.label, "oos_dispatch needs a prior `design` run".into()))
                }
                RunMode::OosDispatch => {}
                _ if p.design.is_some() => out.push(plan_err(&p.label, "`design` only applies to oos_dispatch".into())),
                _ => {}
            }
            if p.baseline.is_some() && p.mode != RunMode::Deterministic && p.mode != RunMode::Stochastic {
                out.push(plan_err(&p.label, "`baseline` only applies to design runs".into()));
            }
            if p.h2_storage_hours.is_some_and(|h| !(h >= 0.0)) {
                out.push(plan_err(&p.label, "h2_storage_hours must be >= 0".into()));
            }
        }
        if !out.is_empty() {
            return out;
        }

        let shared: BTreeSet<(String, String)> =
            validate_case(&self.case).into_iter().map(|v| (v.field, v.rule)).collect();
        out.extend(shared.iter().map(|(f, r)| Violation { field: f.clone(), rule: r.clone() }));
        for p in &self.runs {
            match self.case_for(p) {
                Ok(case) => {
                    if p.mode == RunMode::Deterministic && case.scenarios.len() != 1 {
                        out.push(plan_err(
                            &p.label,
                            format!("deterministic runs take exactly one scenario, got {}", case.scenarios.len()),
                        ));
                    }
                    for v in validate_case(&case) {
                        if !shared.contains(&(v.field.clone(), v.rule.clone())) {
                            out.push(Violation { field: format!("run.{}: {}", p.label, v.field), rule: v.rule });
                        }
                    }
                }
                Err(e) => out.push(plan_err(&p.label, e.to_string())),
            }
        }
        out
    }

    /// Hash of everything that determines one run's results. `deps` are the
    /// hashes of the runs it reads from.
    pub fn run_hash(&self, plan: &RunPlan, case: &SystemCase, deps: &[String]) -> String {
        json_hash(&(case, plan, &self.solver, deps))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::TmrKind;

    #[test]
    fn policy_override_merges_and_clears() {
        let base = PolicyConfig::hourly(1.0);
        let mut m = serde_json::Map::new();
        m.insert("alpha_tmr".into(), Value::from(0.9));
        m.insert("excess_sales_beta".into(), Value::from("none"));
        m.insert("penalties".into(), serde_json::json!({ "tmr_slack": 100.0 }));
        let p = PolicyOverride(m).apply(&base).unwrap();
        assert_eq!(p.tmr, TmrKind::Hourly);
        assert_eq!(p.alpha_tmr, 0.9);
        assert_eq!(p.excess_sales_beta, None);
        assert_eq!(p.penalties.tmr_slack, 100.0);
        assert_eq!(p.penalties.voll, base.penalties.voll);

        let mut bad = serde_json::Map::new();
        bad.insert("alpha".into(), Value::from(1.0));
        assert!(PolicyOverride(bad).apply(&base).unwrap_err().contains("alpha"));
    }

    #[test]
    fn tmr_none_is_a_value_not_a_clear() {
        let mut m = serde_json::Map::new();
        m.insert("tmr".into(), Value::from("none"));
        let p = PolicyOverride(m).apply(&PolicyConfig::annual()).unwrap();
        assert_eq!(p.tmr, TmrKind::None);
    }
}
