//! Weather-year library: plant-level generation aggregated to group
//! capacity factors, k-means reduction to representative design years, and
//! out-of-sample sampling.

mod io;
mod kmeans;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domain::{DomainError, WeatherScenario};

pub use io::{read_plants, write_library};
pub use kmeans::{kmeans, kmeans_reduce, KMeans, MAX_LLOYD_ITERATIONS};

/// Capacity-factor group a plant belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlantGroup {
    ExistingWind,
    NewWind,
    ExistingSolar,
    NewSolar,
}

impl PlantGroup {
    pub const ALL: [PlantGroup; 4] =
        [PlantGroup::ExistingWind, PlantGroup::NewWind, PlantGroup::ExistingSolar, PlantGroup::NewSolar];

    pub fn as_str(self) -> &'static str {
        match self {
            PlantGroup::ExistingWind => "existing_wind",
            PlantGroup::NewWind => "new_wind",
            PlantGroup::ExistingSolar => "existing_solar",
            PlantGroup::NewSolar => "new_solar",
        }
    }

    /// Accepts `new_wind` and `new-wind` spellings.
    pub fn parse(s: &str) -> Option<Self> {
        let norm = s.trim().replace('-', "_");
        Self::ALL.into_iter().find(|g| g.as_str() == norm)
    }
}

impl fmt::Display for PlantGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One VRE plant with its hourly generation (MWh) per weather year.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantRecord {
    pub plant_id: String,
    pub group: PlantGroup,
    pub capacity_mw: f64,
    pub generation: BTreeMap<i32, Vec<f64>>,
}

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("group `{group}` has no capacity with data for year {year}")]
    ZeroCapacity { group: PlantGroup, year: i32 },
    #[error("plant `{plant}`: {msg}")]
    BadPlant { plant: String, msg: String },
    #[error("k must be between 1 and the number of years ({years}), got {k}")]
    BadK { k: usize, years: usize },
    #[error("empty scenario library")]
    EmptyLibrary,
    #[error("feature group `{group}` missing for year {year}")]
    MissingFeature { group: String, year: i32 },
    #[error("requested {n} out-of-sample years but only {available} are outside the design set")]
    TooManyOos { n: usize, available: usize },
    #[error("unknown year {0}")]
    UnknownYear(i32),
    #[error(transparent)]
    Domain(#[from] DomainError),
}

/// Capacity-weighted group profiles of one year: `Σ gen[t] / Σ capacity`
/// over the plants with data for `year`, clamped to [0, 1]. Returns the
/// series per group and the number of clamped values.
pub fn aggregate_profiles(
    plants: &[PlantRecord],
    year: i32,
) -> Result<(BTreeMap<String, Vec<f64>>, usize), ScenarioError> {
    let mut sums: BTreeMap<PlantGroup, (f64, Vec<f64>)> = BTreeMap::new();
    let groups: BTreeSet<PlantGroup> = plants.iter().map(|p| p.group).collect();
    // sort by id so the floating-point summation order does not depend on input order
    let mut ordered: Vec<&PlantRecord> = plants.iter().collect();
    ordered.sort_by(|a, b| a.plant_id.cmp(&b.plant_id));
    for p in ordered {
        if !(p.capacity_mw > 0.0 && p.capacity_mw.is_finite()) {
            return Err(ScenarioError::BadPlant { plant: p.plant_id.clone(), msg: "capacity must be > 0".into() });
        }
        let Some(gen) = p.generation.get(&year) else { continue };
        let entry = sums.entry(p.group).or_insert_with(|| (0.0, vec![0.0; gen.len()]));
        if entry.1.len() != gen.len() {
            return Err(ScenarioError::BadPlant {
                plant: p.plant_id.clone(),
                msg: format!("{} hours in {year}, other plants have {}", gen.len(), entry.1.len()),
            });
        }
        entry.0 += p.capacity_mw;
        for (acc, &g) in entry.1.iter_mut().zip(gen) {
            if g < 0.0 {
                return Err(ScenarioError::BadPlant { plant: p.plant_id.clone(), msg: "negative generation".into() });
            }
            *acc += g;
        }
    }
    let mut clamps = 0;
    let mut out = BTreeMap::new();
    for g in groups {
        let (cap, total) = sums.remove(&g).ok_or(ScenarioError::ZeroCapacity { group: g, year })?;
        if cap <= 0.0 {
            return Err(ScenarioError::ZeroCapacity { group: g, year });
        }
        let series: Vec<f64> = total
            .iter()
            .map(|&x| {
                let cf = x / cap;
                if cf > 1.0 {
                    clamps += 1;
                }
                cf.clamp(0.0, 1.0)
            })
            .collect();
        out.insert(g.as_str().to_string(), series);
    }
    if clamps > 0 {
        log::warn!("{year}: clamped {clamps} capacity factors above 1");
    }
    Ok((out, clamps))
}

/// Weather years keyed by calendar year, with the design and out-of-sample
/// selections.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ScenarioLibrary {
    pub years: BTreeMap<i32, WeatherScenario>,
    pub design_years: Vec<i32>,
    pub oos_years: Vec<i32>,
}

impl ScenarioLibrary {
    /// Aggregates every year that appears in any plant record.
    pub fn from_plants(plants: &[PlantRecord]) -> Result<Self, ScenarioError> {
        let years: BTreeSet<i32> = plants.iter().flat_map(|p| p.generation.keys().copied()).collect();
        let mut lib = ScenarioLibrary::default();
        let weight = 1.0 / years.len().max(1) as f64;
        for y in years {
            let (cf_by_group, _) = aggregate_profiles(plants, y)?;
            lib.years.insert(y, WeatherScenario { year_label: y.to_string(), cf_by_group, weight });
        }
        Ok(lib)
    }

    /// Scenarios for `years` with uniform weights.
    pub fn scenarios(&self, years: &[i32]) -> Result<Vec<WeatherScenario>, ScenarioError> {
        let w = 1.0 / years.len().max(1) as f64;
        years
            .iter()
            .map(|y| {
                let mut s = self.years.get(y).cloned().ok_or(ScenarioError::UnknownYear(*y))?;
                s.weight = w;
                Ok(s)
            })
            .collect()
    }
}

/// Uniform sample of `n` years outside the design set, without replacement,
/// returned in ascending order.
pub fn sample_oos(library: &ScenarioLibrary, n: usize, seed: u64) -> Result<Vec<i32>, ScenarioError> {
    let design: BTreeSet<i32> = library.design_years.iter().copied().collect();
    let pool: Vec<i32> = library.years.keys().copied().filter(|y| !design.contains(y)).collect();
    if n > pool.len() {
        return Err(ScenarioError::TooManyOos { n, available: pool.len() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked: Vec<i32> = rand::seq::index::sample(&mut rng, pool.len(), n).into_iter().map(|i| pool[i]).collect();
    picked.sort_unstable();
    Ok(picked)
}
