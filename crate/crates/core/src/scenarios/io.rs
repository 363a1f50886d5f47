use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::{PlantGroup, PlantRecord, ScenarioError, ScenarioLibrary};
use crate::domain::io::{trim_leap_day, write_series};
use crate::domain::DomainError;
use crate::fsutil::write_atomic;

#[derive(Deserialize)]
struct RegistryRow {
    plant_id: String,
    group: String,
    capacity_mw: f64,
}

#[derive(Deserialize)]
struct GenerationRow {
    year: i32,
    hour: usize,
    plant_id: String,
    mwh: f64,
}

fn csv_err(path: &Path, e: csv::Error) -> DomainError {
    let line = e.position().map_or(0, |p| p.line());
    DomainError::Csv { path: path.to_path_buf(), line, msg: e.to_string() }
}

/// Reads a `plant_id,group,capacity_mw` registry and long-format
/// `year,hour,plant_id,mwh` generation. Hours run 1..T without gaps per
/// plant and year; leap years lose Feb 29.
pub fn read_plants(registry: &Path, generation: &Path) -> Result<Vec<PlantRecord>, ScenarioError> {
    let mut rdr =
        csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(registry).map_err(|e| csv_err(registry, e))?;
    let mut plants: Vec<PlantRecord> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    for row in rdr.deserialize::<RegistryRow>() {
        let row = row.map_err(|e| csv_err(registry, e))?;
        let group = PlantGroup::parse(&row.group).ok_or_else(|| ScenarioError::BadPlant {
            plant: row.plant_id.clone(),
            msg: format!("unknown group `{}`", row.group),
        })?;
        if index.insert(row.plant_id.clone(), plants.len()).is_some() {
            return Err(ScenarioError::BadPlant { plant: row.plant_id, msg: "listed twice in the registry".into() });
        }
        plants.push(PlantRecord {
            plant_id: row.plant_id,
            group,
            capacity_mw: row.capacity_mw,
            generation: BTreeMap::new(),
        });
    }

    let mut raw: BTreeMap<(usize, i32), BTreeMap<usize, f64>> = BTreeMap::new();
    let mut rdr =
        csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(generation).map_err(|e| csv_err(generation, e))?;
    for row in rdr.deserialize::<GenerationRow>() {
        let row = row.map_err(|e| csv_err(generation, e))?;
        let &p = index.get(&row.plant_id).ok_or_else(|| ScenarioError::BadPlant {
            plant: row.plant_id.clone(),
            msg: "generation for a plant missing from the registry".into(),
        })?;
        if raw.entry((p, row.year)).or_default().insert(row.hour, row.mwh).is_some() {
            return Err(ScenarioError::BadPlant {
                plant: row.plant_id,
                msg: format!("hour {} of {} appears twice", row.hour, row.year),
            });
        }
    }
    for ((p, year), hours) in raw {
        let n = hours.len();
        if hours.keys().next() != Some(&1) || hours.keys().next_back() != Some(&n) {
            return Err(ScenarioError::BadPlant {
                plant: plants[p].plant_id.clone(),
                msg: format!("hours of {year} must run 1..{n} without gaps"),
            });
        }
        let mut series: Vec<f64> = hours.into_values().collect();
        if trim_leap_day(&mut series) {
            log::info!("plant {} year {year}: trimmed Feb 29", plants[p].plant_id);
        }
        plants[p].generation.insert(year, series);
    }
    Ok(plants)
}

/// Writes one `cf_<year>.csv` per year (one column per group) and the
/// design/out-of-sample selection as `selection.json`.
pub fn write_library(dir: &Path, library: &ScenarioLibrary) -> Result<Vec<PathBuf>, ScenarioError> {
    fs::create_dir_all(dir).map_err(|e| DomainError::io(dir, e))?;
    let mut written = Vec::new();
    for (year, s) in &library.years {
        let path = dir.join(format!("cf_{year}.csv"));
        let mut buf = Vec::new();
        write_series(&mut buf, &s.cf_by_group).map_err(|e| csv_err(&path, e))?;
        write_atomic(&path, &buf).map_err(|e| DomainError::io(&path, e))?;
        written.push(path);
    }
    let path = dir.join("selection.json");
    let sel = serde_json::json!({ "design_years": library.design_years, "oos_years": library.oos_years });
    let text = serde_json::to_string_pretty(&sel).expect("selection serializes") + "\n";
    write_atomic(&path, text.as_bytes()).map_err(|e| DomainError::io(&path, e))?;
    written.push(path);
    Ok(written)
}
