//! On-disk layout of one run: `capacities.csv`, `dispatch.csv`, `duals.csv`
//! and `report.json`, written in that order so that `report.json` marks a
//! complete run. CSVs start with a `# config_hash=.. seed=..` line.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use super::{RunError, RunRecord};
use crate::analysis::Provenance;
use crate::domain::SystemCase;
use crate::fsutil::write_atomic;
use crate::lp::{dual_series, LpError, Solution};
use crate::model::{Capacities, Model};

pub const RECORD_FILE: &str = "report.json";
pub const RUN_FILES: [&str; 4] = ["capacities.csv", "dispatch.csv", "duals.csv", RECORD_FILE];
/// Written instead of `report.json` when a run fails.
pub(crate) const ERROR_FILE: &str = "error.txt";

/// Row families whose duals are written, hourly ones first.
const DUAL_FAMILIES: [&str; 7] =
    ["power_balance", "h2_balance", "crm", "tmr_hourly", "rps", "tmr_annual", "excess_cap"];

/// One solved LP of a run: the design itself or one dispatch scenario.
pub(crate) struct SolvedPart<'a> {
    pub case: &'a SystemCase,
    pub model: &'a Model,
    pub sol: &'a Solution,
}

fn csv_bytes(prov: &Provenance, header: &[&str], rows: Vec<Vec<String>>) -> io::Result<Vec<u8>> {
    let mut buf = format!("# {}\n", prov.comment()).into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(header)?;
        for r in rows {
            w.write_record(&r)?;
        }
        w.flush()?;
    }
    Ok(buf)
}

fn capacity_rows(caps: &Capacities) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    let mut push = |res: &str, q: &str, unit: &str, v: f64| {
        rows.push(vec![res.to_string(), q.to_string(), unit.to_string(), v.to_string()])
    };
    for t in &caps.techs {
        push(&t.id, "power_new", "MW", t.power_new);
        push(&t.id, "power_retired", "MW", t.power_retired);
        push(&t.id, "power_total", "MW", t.power_total);
        if t.energy_total != 0.0 || t.energy_new != 0.0 || t.energy_retired != 0.0 {
            push(&t.id, "energy_new", "MWh", t.energy_new);
            push(&t.id, "energy_retired", "MWh", t.energy_retired);
            push(&t.id, "energy_total", "MWh", t.energy_total);
        }
    }
    push("electrolyzer", "capacity", "MW", caps.h2.electrolyzer_mw);
    push("h2_storage", "capacity", "t", caps.h2.storage_tonnes);
    push("compressor", "capacity", "t/h", caps.h2.compressor_tph);
    rows
}

fn dispatch_table(parts: &[SolvedPart]) -> (Vec<String>, Vec<Vec<String>>) {
    let first = &parts[0];
    let vars = &first.model.vars;
    let mut header = vec!["scenario".to_string(), "hour".into(), "grid_load".into()];
    for (spec, tv) in first.case.technologies.iter().zip(&vars.techs) {
        header.push(spec.id.clone());
        if tv.commit.is_some() {
            header.push(format!("{}_on", spec.id));
        }
        if tv.storage.is_some() {
            header.push(format!("{}_charge", spec.id));
            header.push(format!("{}_soc", spec.id));
        }
    }
    header.push("nse_power".into());
    if vars.h2.is_some() {
        for h in ["h2_gen", "h2_charge", "h2_discharge", "h2_level", "nse_h2", "electrolyzer_mw"] {
            header.push(h.into());
        }
    }
    if vars.tmr_slack.is_some() {
        header.push("tmr_slack".into());
    }
    if vars.crm_slack.is_some() {
        header.push("crm_slack".into());
    }

    let mut rows = Vec::new();
    for p in parts {
        let vars = &p.model.vars;
        let x = |v: crate::lp::VarId| p.sol.primal[v.0].to_string();
        for s in 0..vars.scenarios {
            for t in 0..vars.hours {
                let mut r = vec![
                    p.case.scenarios[s].year_label.clone(),
                    (t + 1).to_string(),
                    p.case.demand.grid_load[t].to_string(),
                ];
                for tv in &vars.techs {
                    r.push(x(tv.gen.at(s, t)));
                    if let Some(c) = &tv.commit {
                        r.push(x(c.on.at(s, t)));
                    }
                    if let Some(st) = &tv.storage {
                        r.push(x(st.charge.at(s, t)));
                        r.push(x(st.energy.at(s, t)));
                    }
                }
                r.push(x(vars.nse_power.at(s, t)));
                if let (Some(h), Some(spec)) = (&vars.h2, &p.case.h2_project) {
                    for g in [&h.gen, &h.charge, &h.discharge, &h.level, &h.nse] {
                        r.push(x(g.at(s, t)));
                    }
                    r.push(spec.electrolyzer_draw(p.sol.primal[h.gen.at(s, t).0]).to_string());
                }
                if let Some(g) = &vars.tmr_slack {
                    r.push(x(g.at(s, t)));
                }
                if let Some(g) = &vars.crm_slack {
                    r.push(x(g.at(s, t)));
                }
                rows.push(r);
            }
        }
    }
    (header, rows)
}

fn dual_rows(parts: &[SolvedPart]) -> Result<Vec<Vec<String>>, LpError> {
    let mut rows = Vec::new();
    for family in DUAL_FAMILIES {
        for p in parts {
            let series = match dual_series(p.sol, family) {
                Ok(d) => d,
                Err(LpError::UnknownPrefix(_)) => continue,
                Err(e) => return Err(e),
            };
            let hourly = family_is_hourly(family);
            for (s, vals) in series.values.iter().enumerate() {
                let w = p.model.op_weight(s);
                for (t, d) in vals.iter().enumerate() {
                    let Some(d) = d else { continue };
                    rows.push(vec![
                        family.to_string(),
                        p.case.scenarios[s].year_label.clone(),
                        if hourly { (t + 1).to_string() } else { String::new() },
                        d.to_string(),
                        (d / w).to_string(),
                    ]);
                }
            }
        }
    }
    Ok(rows)
}

fn family_is_hourly(family: &str) -> bool {
    DUAL_FAMILIES[..4].contains(&family)
}

/// Writes every file of a finished run into `dir`.
pub(crate) fn write_run(
    dir: &Path,
    record: &RunRecord,
    capacities: &Capacities,
    parts: &[SolvedPart],
) -> Result<(), RunError> {
    let prov = &record.provenance;
    let put = |name: &str, bytes: io::Result<Vec<u8>>| -> Result<(), RunError> {
        let path = dir.join(name);
        bytes.and_then(|b| write_atomic(&path, &b)).map_err(|e| RunError::io(path, e))
    };
    let _ = fs::remove_file(dir.join(ERROR_FILE));
    put("capacities.csv", csv_bytes(prov, &["resource", "quantity", "unit", "value"], capacity_rows(capacities)))?;
    let (header, rows) = dispatch_table(parts);
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    put("dispatch.csv", csv_bytes(prov, &header, rows))?;
    let duals = dual_rows(parts).map_err(|e| RunError::Solver { label: record.label.clone(), source: e })?;
    put("duals.csv", csv_bytes(prov, &["row", "scenario", "hour", "dual", "price"], duals))?;
    let mut json = serde_json::to_string_pretty(record).expect("record serializes");
    json.push('\n');
    put(RECORD_FILE, Ok(json.into_bytes()))
}

pub(crate) fn write_error(dir: &Path, err: &RunError) {
    let _ = fs::remove_file(dir.join(RECORD_FILE));
    if let Err(e) = write_atomic(&dir.join(ERROR_FILE), format!("{err}\n").as_bytes()) {
        log::warn!("{}: cannot record failure: {e}", dir.display());
    }
}

/// Reads `dir/report.json`; `None` when the run has not completed.
pub fn read_record(dir: &Path) -> Result<Option<RunRecord>, RunError> {
    let path = dir.join(RECORD_FILE);
    let text = match fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(RunError::io(path, e)),
    };
    serde_json::from_str(&text).map(Some).map_err(|e| RunError::Config(format!("{}: {e}", path.display())))
}

/// Completed records under `runs_dir` ordered by label, and the run
/// directories that have no record.
pub fn read_records(runs_dir: &Path) -> Result<(Vec<RunRecord>, Vec<PathBuf>), RunError> {
    let entries = fs::read_dir(runs_dir).map_err(|e| RunError::io(runs_dir, e))?;
    let mut dirs: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir() && !p.file_name().is_some_and(|n| n.to_string_lossy().starts_with('.')))
        .collect();
    dirs.sort();
    let (mut done, mut partial) = (Vec::new(), Vec::new());
    for d in dirs {
        match read_record(&d)? {
            Some(r) => done.push(r),
            None => partial.push(d),
        }
    }
    done.sort_by(|a, b| a.label.cmp(&b.label));
    Ok((done, partial))
}
