//! Cross-run comparison tables.

use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::CaseReport;
use crate::fsutil::write_atomic;

pub const COMPARISON_FILES: [&str; 3] = ["emissions_by_case.csv", "lcoh_by_case.csv", "revenue_stacks.csv"];

/// Configuration hash and seed stamped into every output file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub config_hash: String,
    pub seed: u64,
}

impl Provenance {
    pub fn comment(&self) -> String {
        format!("config_hash={} seed={}", self.config_hash, self.seed)
    }
}

fn fmt(v: Option<f64>) -> String {
    v.map_or(String::new(), |x| x.to_string())
}

fn table(prov: &Provenance, header: Vec<String>, rows: Vec<Vec<String>>) -> io::Result<Vec<u8>> {
    let mut buf = format!("# {}\n", prov.comment()).into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(&header)?;
        for r in rows {
            w.write_record(&r)?;
        }
        w.flush()?;
    }
    Ok(buf)
}

/// Metric-by-case table: one column per report, then, when `deltas` is set,
/// one `delta_<label>_vs_<ref>` column per other report with values, where
/// `ref` is the first report with any value.
fn wide(
    prov: &Provenance,
    reports: &[&CaseReport],
    metrics: &[(&str, &dyn Fn(&CaseReport) -> Option<f64>)],
    deltas: bool,
) -> io::Result<Vec<u8>> {
    let has_values = |r: &CaseReport| metrics.iter().any(|(_, f)| f(r).is_some());
    let reference = reports.iter().position(|r| has_values(r));
    let others: Vec<usize> = match (deltas, reference) {
        (true, Some(i)) => (0..reports.len()).filter(|&j| j != i && has_values(reports[j])).collect(),
        _ => Vec::new(),
    };
    let mut header = vec!["metric".to_string()];
    header.extend(reports.iter().map(|r| r.label.clone()));
    if let Some(i) = reference {
        header.extend(others.iter().map(|&j| format!("delta_{}_vs_{}", reports[j].label, reports[i].label)));
    }
    let rows = metrics
        .iter()
        .map(|(name, f)| {
            let vals: Vec<Option<f64>> = reports.iter().map(|r| f(r)).collect();
            let mut row = vec![name.to_string()];
            row.extend(vals.iter().map(|&v| fmt(v)));
            if let Some(i) = reference {
                row.extend(others.iter().map(|&j| fmt(vals[j].zip(vals[i]).map(|(a, b)| a - b))));
            }
            row
        })
        .collect();
    table(prov, header, rows)
}

/// Writes the comparison tables into `dir`; reports are ordered by label.
pub fn write_comparisons(dir: &Path, reports: &[CaseReport], prov: &Provenance) -> io::Result<Vec<PathBuf>> {
    let mut sorted: Vec<&CaseReport> = reports.iter().collect();
    sorted.sort_by(|a, b| a.label.cmp(&b.label));

    let emissions = wide(
        prov,
        &sorted,
        &[
            ("emissions_t", &|r| Some(r.emissions_t)),
            ("h2_production_t", &|r| Some(r.h2_production_t)),
            ("consequential_emissions_t_per_t", &|r| r.consequential_emissions),
        ],
        false,
    )?;
    let l = |f: fn(&super::LcohBreakdown) -> f64| move |r: &CaseReport| r.lcoh.as_ref().map(f);
    let lcoh = wide(
        prov,
        &sorted,
        &[
            ("lcoh_per_kg", &l(|b| b.lcoh)),
            ("electrolyzer", &l(|b| b.electrolyzer)),
            ("h2_storage", &l(|b| b.h2_storage)),
            ("compressor", &l(|b| b.compressor)),
            ("energy_purchases", &l(|b| b.energy_purchases)),
            ("capacity_purchases", &l(|b| b.capacity_purchases)),
            ("ppa_fixed", &l(|b| b.ppa_fixed)),
            ("ppa_variable", &l(|b| b.ppa_variable)),
            ("ppa_sales", &l(|b| b.ppa_sales)),
            ("h2_tonnes", &l(|b| b.h2_tonnes)),
        ],
        true,
    )?;
    let header = [
        "case",
        "resource",
        "installed_mw",
        "is_ppa",
        "electricity_sales",
        "capacity_reserve",
        "rps",
        "tmr",
        "excess_cap_charge",
        "total_revenue",
        "total_cost",
        "net",
    ]
    .map(String::from)
    .to_vec();
    let mut rows = Vec::new();
    for r in &sorted {
        for s in &r.revenue {
            rows.push(vec![
                r.label.clone(),
                s.id.clone(),
                s.installed_mw.to_string(),
                s.is_ppa.to_string(),
                s.electricity_sales.to_string(),
                s.capacity_reserve.to_string(),
                s.rps.to_string(),
                s.tmr.to_string(),
                s.excess_cap_charge.to_string(),
                s.total_revenue.to_string(),
                s.total_cost.to_string(),
                s.net().to_string(),
            ]);
        }
    }
    let revenue = table(prov, header, rows)?;

    let mut written = Vec::new();
    for (name, bytes) in COMPARISON_FILES.iter().zip([emissions, lcoh, revenue]) {
        let path = dir.join(name);
        write_atomic(&path, &bytes)?;
        written.push(path);
    }
    Ok(written)
}
