//! Solving runs and executing the experiment grid.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use super::manifest::{sha256_hex, Backend, Experiment, RunPlan, SolverConfig};
use super::output::{read_record, write_error, write_run, SolvedPart};
use super::{DesignSolution, RunError, RunMode, RunRecord};
use crate::analysis::{
    build_report, consequential_emissions, matching_series, robustness_from_series, CaseReport, Provenance, Robustness,
    Solved,
};
use crate::domain::{SystemCase, WeatherScenario};
use crate::fsutil::write_atomic;
use crate::lp::{self, external::solve_external, FileFormat, Solution};
use crate::model::{assemble, Mode, Model};

/// A solved design or baseline.
#[derive(Debug, Clone)]
pub struct DesignOutcome {
    pub case: SystemCase,
    pub model: Model,
    pub solution: Solution,
    pub design: DesignSolution,
    pub report: CaseReport,
}

/// Dispatch of a fixed design on one scenario.
#[derive(Debug, Clone)]
pub struct DispatchOutcome {
    pub scenario: String,
    pub case: SystemCase,
    pub model: Model,
    pub solution: Solution,
    pub report: CaseReport,
}

fn file_stem(label: &str) -> String {
    label.replace('@', "_")
}

/// Solves `model`. A non-optimal result leaves the LP in `artifacts` as MPS.
fn solve_model(
    label: &str,
    model: &Model,
    solver: &SolverConfig,
    artifacts: &Path,
    emit_lp: Option<&Path>,
) -> Result<Solution, RunError> {
    let stem = file_stem(label);
    let mps = |dir: &Path| -> Result<PathBuf, RunError> {
        let path = dir.join(format!("{stem}.mps"));
        let bytes = lp::emit_lp_file(&model.lp, FileFormat::Mps)
            .map_err(|e| RunError::Solver { label: label.into(), source: e })?;
        write_atomic(&path, &bytes).map_err(|e| RunError::io(&path, e))?;
        Ok(path)
    };
    if let Some(dir) = emit_lp {
        mps(dir)?;
    }
    let started = Instant::now();
    let sol = match solver.backend {
        Backend::Embedded => lp::solve(&model.lp, &solver.options()),
        Backend::External => {
            let work = artifacts.join(format!(".solver_{stem}"));
            let res = solve_external(&model.lp, &solver.command, &work);
            let _ = std::fs::remove_dir_all(&work);
            res
        }
    }
    .map_err(|e| RunError::Solver { label: label.into(), source: e })?;
    log::info!(
        "{label}: {:?} after {} iterations in {:.1}s ({} rows, {} columns)",
        sol.status,
        sol.iterations,
        started.elapsed().as_secs_f64(),
        model.lp.num_rows(),
        model.lp.num_vars()
    );
    if !sol.is_optimal() {
        let lp_path = mps(artifacts)?;
        return Err(RunError::NotOptimal { label: label.into(), status: sol.status, lp_path });
    }
    Ok(sol)
}

fn report_of(case: &SystemCase, model: &Model, sol: &Solution, slack_tol: f64) -> Result<CaseReport, RunError> {
    let label = &case.label;
    Solved::new(case, model, sol)
        .and_then(|v| build_report(&v, label, slack_tol))
        .map_err(|e| RunError::Analysis { label: label.clone(), source: e })
}

/// Assembles and solves a design (or, for `Baseline`, the case stripped of
/// its hydrogen project). One scenario solves deterministically unless
/// `mode` is `Stochastic`.
pub fn run_design(
    case: &SystemCase,
    mode: RunMode,
    solver: &SolverConfig,
    artifacts: &Path,
    emit_lp: Option<&Path>,
) -> Result<DesignOutcome, RunError> {
    let case = match mode {
        RunMode::Baseline => case.without_h2(),
        RunMode::Deterministic | RunMode::Stochastic => case.clone(),
        RunMode::OosDispatch => {
            return Err(RunError::Config(format!("run {}: run_design needs a design mode", case.label)))
        }
    };
    let lp_mode = match mode {
        RunMode::Stochastic => Mode::Stochastic,
        _ if case.scenarios.len() == 1 => Mode::Deterministic,
        _ => Mode::Stochastic,
    };
    let label = case.label.clone();
    let model = assemble(&case, lp_mode).map_err(|e| RunError::Model { label: label.clone(), source: e })?;
    let solution = solve_model(&label, &model, solver, artifacts, emit_lp)?;
    let report = report_of(&case, &model, &solution, solver.slack_tol)?;
    let design = DesignSolution { label, capacities: report.capacities.clone() };
    Ok(DesignOutcome { case, model, solution, design, report })
}

/// Dispatches `design` on each scenario separately with capacities fixed.
/// `case` supplies everything but the scenarios; each dispatch is labelled
/// `<case label>@<scenario>`.
pub fn run_oos(
    case: &SystemCase,
    design: &DesignSolution,
    scenarios: &[WeatherScenario],
    solver: &SolverConfig,
    artifacts: &Path,
    emit_lp: Option<&Path>,
) -> Result<Vec<DispatchOutcome>, RunError> {
    let groups: BTreeSet<&str> =
        case.technologies.iter().filter(|t| t.uses_cf()).filter_map(|t| t.vre_group.as_deref()).collect();
    for sc in scenarios {
        if let Some(g) = groups.iter().find(|g| !sc.cf_by_group.contains_key(**g)) {
            return Err(RunError::Config(format!(
                "run {}: scenario `{}` has no `{g}` series required by design `{}`",
                case.label, sc.year_label, design.label
            )));
        }
    }
    scenarios
        .par_iter()
        .map(|sc| {
            let mut c = case.clone();
            c.label = format!("{}@{}", case.label, sc.year_label);
            c.scenarios = vec![WeatherScenario { weight: 1.0, ..sc.clone() }];
            let model = assemble(&c, Mode::Dispatch(design.capacities.clone()))
                .map_err(|e| RunError::Model { label: c.label.clone(), source: e })?;
            let solution = solve_model(&c.label, &model, solver, artifacts, emit_lp)?;
            let report = report_of(&c, &model, &solution, solver.slack_tol)?;
            Ok(DispatchOutcome { scenario: sc.year_label.clone(), case: c, model, solution, report })
        })
        .collect()
}

/// Matching robustness pooled over every dispatch scenario.
pub fn pooled_robustness(outcomes: &[DispatchOutcome], tol: f64) -> Option<Robustness> {
    let (mut slack, mut load) = (Vec::new(), Vec::new());
    for o in outcomes {
        o.model.vars.tmr_slack.as_ref()?;
        let v = Solved::new(&o.case, &o.model, &o.solution).ok()?;
        let (s, l) = matching_series(&v).ok()?;
        slack.extend(s);
        load.extend(l);
    }
    Some(robustness_from_series(&slack, &load, tol))
}

#[derive(Debug, Clone, Default)]
pub struct ExecOptions {
    /// Runs whose label matches; their dependencies are added.
    pub labels: Option<glob::Pattern>,
    /// Re-solve runs that already have a matching record.
    pub force: bool,
    /// Also write every LP as MPS into this directory.
    pub emit_lp: Option<PathBuf>,
}

#[derive(Debug, Default)]
pub struct RunSummary {
    pub solved: Vec<String>,
    pub skipped: Vec<String>,
    pub failed: Vec<(String, RunError)>,
    /// Records of solved and skipped runs, ordered by label.
    pub records: Vec<RunRecord>,
}

impl RunSummary {
    pub fn is_success(&self) -> bool {
        self.failed.is_empty()
    }

    /// Provenance for outputs that combine several runs.
    pub fn provenance(&self, seed: u64) -> Provenance {
        combined_provenance(&self.records, seed)
    }
}

/// Hash over the per-run hashes of `records`, in label order.
pub fn combined_provenance(records: &[RunRecord], seed: u64) -> Provenance {
    let mut hashes: Vec<(&str, &str)> =
        records.iter().map(|r| (r.label.as_str(), r.provenance.config_hash.as_str())).collect();
    hashes.sort_unstable();
    let joined: String = hashes.iter().map(|(l, h)| format!("{l}={h}\n")).collect();
    Provenance { config_hash: sha256_hex(joined.as_bytes()), seed }
}

/// Labels to execute: matches of the filter plus everything they depend on.
fn selection(exp: &Experiment, pattern: Option<&glob::Pattern>) -> BTreeSet<String> {
    let mut todo: Vec<&str> =
        exp.runs.iter().filter(|p| pattern.map_or(true, |g| g.matches(&p.label))).map(|p| p.label.as_str()).collect();
    let mut out = BTreeSet::new();
    while let Some(l) = todo.pop() {
        if out.insert(l.to_string()) {
            if let Some(p) = exp.plan(l) {
                todo.extend(p.dependencies());
            }
        }
    }
    out
}

enum Outcome {
    Solved(RunRecord),
    Skipped(RunRecord),
}

fn run_one(
    exp: &Experiment,
    plan: &RunPlan,
    done: &BTreeMap<String, RunRecord>,
    runs_dir: &Path,
    opts: &ExecOptions,
) -> Result<Outcome, RunError> {
    let dep_err = |msg: String| RunError::Dependency { label: plan.label.clone(), msg };
    let mut deps = Vec::new();
    for d in plan.dependencies() {
        let rec = done.get(d).ok_or_else(|| dep_err(format!("run `{d}` did not complete")))?;
        deps.push(rec.provenance.config_hash.clone());
    }
    let case = exp.case_for(plan)?;
    let hash = exp.run_hash(plan, &case, &deps);
    let dir = runs_dir.join(&plan.label);
    if !opts.force {
        if let Some(rec) = read_record(&dir)? {
            if rec.provenance.config_hash == hash && rec.provenance.seed == exp.seed {
                log::info!("{}: up to date, skipped", plan.label);
                return Ok(Outcome::Skipped(rec));
            }
            log::info!("{}: inputs changed since the last run, solving again", plan.label);
        }
    }
    std::fs::create_dir_all(&dir).map_err(|e| RunError::io(&dir, e))?;
    let provenance = Provenance { config_hash: hash, seed: exp.seed };
    let emit = opts.emit_lp.as_deref();
    let scenarios = case.scenarios.iter().map(|s| s.year_label.clone()).collect();

    let res = match plan.mode {
        RunMode::OosDispatch => {
            let design_label = plan.design.as_deref().unwrap_or_default();
            let design = done
                .get(design_label)
                .and_then(RunRecord::design_solution)
                .ok_or_else(|| dep_err(format!("run `{design_label}` has no design")))?;
            let pool = case.scenarios.clone();
            run_oos(&case, &design, &pool, &exp.solver, &dir, emit).and_then(|outs| {
                let record = RunRecord {
                    label: plan.label.clone(),
                    mode: plan.mode,
                    scenarios,
                    provenance,
                    design: Some(design.label.clone()),
                    report: None,
                    dispatch: outs.iter().map(|o| o.report.clone()).collect(),
                    robustness: pooled_robustness(&outs, exp.solver.slack_tol),
                };
                let parts: Vec<SolvedPart> =
                    outs.iter().map(|o| SolvedPart { case: &o.case, model: &o.model, sol: &o.solution }).collect();
                write_run(&dir, &record, &design.capacities, &parts)?;
                Ok(record)
            })
        }
        mode => run_design(&case, mode, &exp.solver, &dir, emit).and_then(|mut out| {
            if let Some(b) = &plan.baseline {
                let base = done[b].report.as_ref().ok_or_else(|| dep_err(format!("run `{b}` has no report")))?;
                if out.report.h2_production_t > 0.0 {
                    out.report.consequential_emissions = Some(
                        consequential_emissions(&out.report, base, out.report.h2_production_t)
                            .map_err(|e| RunError::Analysis { label: plan.label.clone(), source: e })?,
                    );
                }
            }
            let record = RunRecord {
                label: plan.label.clone(),
                mode: plan.mode,
                scenarios,
                provenance,
                design: None,
                report: Some(out.report.clone()),
                dispatch: Vec::new(),
                robustness: None,
            };
            let part = SolvedPart { case: &out.case, model: &out.model, sol: &out.solution };
            write_run(&dir, &record, &out.design.capacities, &[part])?;
            Ok(record)
        }),
    };
    match res {
        Ok(r) => Ok(Outcome::Solved(r)),
        Err(e) => {
            write_error(&dir, &e);
            Err(e)
        }
    }
}

/// Runs the selected labels stage by stage (baselines, designs, dispatch).
/// Runs within a stage execute in parallel; a failure only affects the runs
/// that depend on it. Outputs go to `<out_dir>/runs/<label>/`.
pub fn execute(exp: &Experiment, out_dir: &Path, opts: &ExecOptions) -> RunSummary {
    let runs_dir = out_dir.join("runs");
    let selected = selection(exp, opts.labels.as_ref());
    let mut summary = RunSummary::default();
    let mut done: BTreeMap<String, RunRecord> = BTreeMap::new();
    for stage in 0..3 {
        let mut plans: Vec<&RunPlan> =
            exp.runs.iter().filter(|p| p.mode.stage() == stage && selected.contains(&p.label)).collect();
        plans.sort_by(|a, b| a.label.cmp(&b.label));
        let results: Vec<(String, Result<Outcome, RunError>)> =
            plans.par_iter().map(|p| (p.label.clone(), run_one(exp, p, &done, &runs_dir, opts))).collect();
        for (label, res) in results {
            match res {
                Ok(Outcome::Solved(r)) => {
                    summary.solved.push(label.clone());
                    done.insert(label, r);
                }
                Ok(Outcome::Skipped(r)) => {
                    summary.skipped.push(label.clone());
                    done.insert(label, r);
                }
                Err(e) => {
                    log::error!("{label}: {e}");
                    summary.failed.push((label, e));
                }
            }
        }
    }
    summary.records = done.into_values().collect();
    summary
}
