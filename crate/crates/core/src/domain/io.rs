//! Case definitions from JSON/TOML and hourly series from CSV.
//!
//! Series files have a header `hour,<series>...` and hours numbered 1..T
//! consecutively. A 8784-hour file is treated as a leap year and Feb 29 is
//! dropped.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{
    DemandProfile, DomainError, FuelSpec, H2ProjectSpec, PolicyConfig, SystemCase, TechnologySpec, WeatherScenario,
    HOURS_PER_YEAR,
};

/// First and last 1-based hour of Feb 29 in a leap year.
pub const LEAP_DAY_HOURS: (usize, usize) = (59 * 24 + 1, 60 * 24);

/// Removes Feb 29 from a leap-year series; other lengths pass through.
pub fn trim_leap_day(series: &mut Vec<f64>) -> bool {
    if series.len() != HOURS_PER_YEAR + 24 {
        return false;
    }
    series.drain(LEAP_DAY_HOURS.0 - 1..LEAP_DAY_HOURS.1);
    true
}

/// Reads a `hour,<series>...` file into named columns.
pub fn read_series_csv(path: &Path) -> Result<BTreeMap<String, Vec<f64>>, DomainError> {
    let file = fs::File::open(path).map_err(|e| DomainError::io(path, e))?;
    read_series(file, path)
}

pub(crate) fn read_series<R: std::io::Read>(reader: R, path: &Path) -> Result<BTreeMap<String, Vec<f64>>, DomainError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).comment(Some(b'#')).from_reader(reader);
    let bad = |line: u64, msg: String| DomainError::Csv { path: path.to_path_buf(), line, msg };
    let headers = rdr.headers().map_err(|e| bad(1, e.to_string()))?.clone();
    if headers.get(0) != Some("hour") {
        return Err(bad(1, "first column must be `hour`".into()));
    }
    let names: Vec<String> = headers.iter().skip(1).map(str::to_string).collect();
    if names.is_empty() {
        return Err(bad(1, "no series columns".into()));
    }
    let mut cols: Vec<Vec<f64>> = vec![Vec::new(); names.len()];
    for (i, rec) in rdr.records().enumerate() {
        let line = rec.as_ref().ok().and_then(|r| r.position()).map_or(i as u64 + 2, |p| p.line());
        let rec = rec.map_err(|e| bad(line, e.to_string()))?;
        let hour: usize = rec[0].parse().map_err(|_| bad(line, format!("bad hour `{}`", &rec[0])))?;
        if hour != i + 1 {
            return Err(bad(line, format!("expected hour {}, found {hour}", i + 1)));
        }
        if rec.len() != names.len() + 1 {
            return Err(bad(line, format!("expected {} fields, found {}", names.len() + 1, rec.len())));
        }
        for (k, col) in cols.iter_mut().enumerate() {
            let v: f64 = rec[k + 1]
                .parse()
                .map_err(|_| bad(line, format!("bad value `{}` in column `{}`", &rec[k + 1], names[k])))?;
            col.push(v);
        }
    }
    let mut out = BTreeMap::new();
    for (name, mut col) in names.into_iter().zip(cols) {
        if trim_leap_day(&mut col) {
            log::info!("{}: trimmed Feb 29 from `{name}`", path.display());
        }
        out.insert(name, col);
    }
    Ok(out)
}

/// Writes named columns as `hour,<series>...`.
pub fn write_series<W: std::io::Write>(out: W, series: &BTreeMap<String, Vec<f64>>) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["hour".to_string()];
    header.extend(series.keys().cloned());
    w.write_record(&header)?;
    let len = series.values().map(Vec::len).max().unwrap_or(0);
    for t in 0..len {
        let mut rec = vec![(t + 1).to_string()];
        rec.extend(series.values().map(|s| s.get(t).map_or(String::new(), |v| v.to_string())));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DemandSource {
    /// CSV with `grid_load` and optionally `h2_demand` columns.
    pub csv: Option<PathBuf>,
    pub grid_load: Option<Vec<f64>>,
    pub h2_demand: Option<Vec<f64>>,
    /// Constant hydrogen demand in t/h, used when no series is given.
    pub h2_constant: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSource {
    pub label: String,
    /// CSV with one column per VRE group.
    #[serde(default)]
    pub csv: Option<PathBuf>,
    #[serde(default)]
    pub cf: Option<BTreeMap<String, Vec<f64>>>,
    /// Probability; when every scenario omits it, weights are uniform.
    #[serde(default)]
    pub weight: Option<f64>,
}

/// Serialized form of a [`SystemCase`]; relative CSV paths resolve against
/// the directory of the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseFile {
    pub label: String,
    #[serde(default)]
    pub hour_weight: Option<f64>,
    #[serde(default)]
    pub policy: PolicyConfig,
    pub technologies: Vec<TechnologySpec>,
    #[serde(default)]
    pub fuels: Vec<FuelSpec>,
    #[serde(default)]
    pub h2_project: Option<H2ProjectSpec>,
    pub demand: DemandSource,
    pub scenarios: Vec<ScenarioSource>,
}

impl CaseFile {
    pub fn resolve(&self, base: &Path) -> Result<SystemCase, DomainError> {
        let at = |p: &Path| if p.is_absolute() { p.to_path_buf() } else { base.join(p) };
        let mut grid = self.demand.grid_load.clone();
        let mut h2 = self.demand.h2_demand.clone();
        if let Some(p) = &self.demand.csv {
            let path = at(p);
            let mut cols = read_series_csv(&path)?;
            if grid.is_none() {
                grid = Some(cols.remove("grid_load").ok_or_else(|| DomainError::Csv {
                    path: path.clone(),
                    line: 1,
                    msg: "missing column `grid_load`".into(),
                })?);
            }
            if h2.is_none() {
                h2 = cols.remove("h2_demand");
            }
        }
        let grid = grid.ok_or_else(|| DomainError::InvalidInput("demand.grid_load: no series given".into()))?;
        let h2 = h2.unwrap_or_else(|| vec![self.demand.h2_constant.unwrap_or(0.0); grid.len()]);

        let given = self.scenarios.iter().filter(|s| s.weight.is_some()).count();
        if given != 0 && given != self.scenarios.len() {
            return Err(DomainError::InvalidInput(
                "scenarios.weight: give a weight for every scenario or for none".into(),
            ));
        }
        let uniform = 1.0 / self.scenarios.len().max(1) as f64;
        let mut scenarios = Vec::with_capacity(self.scenarios.len());
        for s in &self.scenarios {
            let mut cf = s.cf.clone().unwrap_or_default();
            if let Some(p) = &s.csv {
                for (g, v) in read_series_csv(&at(p))? {
                    cf.entry(g).or_insert(v);
                }
            }
            scenarios.push(WeatherScenario {
                year_label: s.label.clone(),
                cf_by_group: cf,
                weight: s.weight.unwrap_or(uniform),
            });
        }
        Ok(SystemCase {
            label: self.label.clone(),
            technologies: self.technologies.clone(),
            fuels: self.fuels.clone(),
            h2_project: self.h2_project.clone(),
            demand: DemandProfile { grid_load: grid, h2_demand: h2 },
            scenarios,
            policy: self.policy.clone(),
            hour_weight: self.hour_weight,
        })
    }
}

/// Config text format, chosen by file extension (`.json` or TOML otherwise).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConfigFormat {
    Json,
    Toml,
}

impl ConfigFormat {
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => ConfigFormat::Json,
            _ => ConfigFormat::Toml,
        }
    }
}

/// Deserializes a config document, reporting line and field context on error.
pub fn parse_config<T: serde::de::DeserializeOwned>(
    text: &str,
    format: ConfigFormat,
    path: &Path,
) -> Result<T, DomainError> {
    let res = match format {
        ConfigFormat::Json => serde_json::from_str(text).map_err(|e| e.to_string()),
        ConfigFormat::Toml => toml::from_str(text).map_err(|e| e.to_string()),
    };
    res.map_err(|msg| DomainError::Config { path: path.to_path_buf(), msg })
}

/// Loads a case file (the case at top level) and resolves its series.
pub fn load_case(path: &Path) -> Result<SystemCase, DomainError> {
    let text = fs::read_to_string(path).map_err(|e| DomainError::io(path, e))?;
    let file: CaseFile = parse_config(&text, ConfigFormat::from_path(path), path)?;
    file.resolve(path.parent().unwrap_or(Path::new(".")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_and_checks_hours() {
        let text = "hour,a,b\n1,0.5,1\n2,0.25,0\n";
        let cols = read_series(text.as_bytes(), Path::new("x.csv")).unwrap();
        assert_eq!(cols["a"], vec![0.5, 0.25]);
        let bad = "hour,a\n1,0.5\n3,0.1\n";
        match read_series(bad.as_bytes(), Path::new("x.csv")) {
            Err(DomainError::Csv { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn leap_day_is_dropped() {
        let mut s: Vec<f64> = (0..8784).map(|h| h as f64).collect();
        assert!(trim_leap_day(&mut s));
        assert_eq!(s.len(), 8760);
        assert_eq!(s[1415], 1415.0);
        assert_eq!(s[1416], 1440.0);
    }

    #[test]
    fn series_round_trip() {
        let mut m = BTreeMap::new();
        m.insert("new_wind".to_string(), vec![0.1, 0.2, 0.3]);
        let mut buf = Vec::new();
        write_series(&mut buf, &m).unwrap();
        assert_eq!(read_series(buf.as_slice(), Path::new("m")).unwrap(), m);
    }
}
