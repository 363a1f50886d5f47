//! Synthetic week-long (168 h) systems used across the integration tests.
//!
//! Series are smooth closed-form shapes so every fixture is reproducible
//! without data files. `hour_weight` is left at its default (8760/168), so
//! annualized costs and operating costs are on the same footing.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use h2match_core::domain::{
    defaults, DemandProfile, PolicyConfig, SystemCase, TechKind, TechnologySpec, WeatherScenario,
};

pub const WEEK: usize = 168;
pub const H2_TPH: f64 = defaults::H2_BASELOAD_TPH;

/// Wind shape: multi-day swell plus a diurnal ripple, scaled by `level`.
pub fn wind_cf(hours: usize, level: f64, phase: f64) -> Vec<f64> {
    (0..hours)
        .map(|t| {
            let x = t as f64;
            let v = 0.5 + 0.3 * (2.0 * PI * x / 61.0 + phase).sin() + 0.1 * (2.0 * PI * x / 24.0 + 1.0).cos();
            (level * v).clamp(0.0, 1.0)
        })
        .collect()
}

/// Solar shape: half-sine between 06:00 and 18:00.
pub fn solar_cf(hours: usize) -> Vec<f64> {
    (0..hours)
        .map(|t| {
            let h = (t % 24) as f64;
            if (6.0..18.0).contains(&h) {
                0.85 * (PI * (h - 6.0) / 12.0).sin()
            } else {
                0.0
            }
        })
        .collect()
}

/// Grid load in MW with a daily peak in the late afternoon.
pub fn grid_load(hours: usize) -> Vec<f64> {
    (0..hours).map(|t| 1000.0 + 250.0 * (2.0 * PI * ((t % 24) as f64 - 11.0) / 24.0).sin()).collect()
}

pub fn scenario(label: &str, wind: Vec<f64>, weight: f64) -> WeatherScenario {
    let hours = wind.len();
    let mut cf = BTreeMap::new();
    cf.insert("wind".to_string(), wind);
    cf.insert("solar".to_string(), solar_cf(hours));
    WeatherScenario { year_label: label.into(), cf_by_group: cf, weight }
}

fn thermal_ct() -> TechnologySpec {
    defaults::ngct("ngct")
}

/// Grid with gas turbines, wind and solar, plus contracted wind, solar and
/// battery for the hydrogen project.
pub fn ladder_case(policy: PolicyConfig) -> SystemCase {
    let hours = WEEK;
    let technologies = vec![
        defaults::ngcc("ngcc"),
        thermal_ct(),
        defaults::onshore_wind("wind", "wind"),
        defaults::solar("solar", "solar"),
        defaults::li_ion_battery("battery"),
        defaults::as_ppa(defaults::onshore_wind("w", "wind"), "ppa_wind"),
        defaults::as_ppa(defaults::solar("s", "solar"), "ppa_solar"),
        defaults::as_ppa(defaults::li_ion_battery("b"), "ppa_battery"),
    ];
    SystemCase {
        label: "ladder".into(),
        technologies,
        fuels: defaults::fuels(),
        h2_project: Some(defaults::h2_project()),
        demand: DemandProfile { grid_load: grid_load(hours), h2_demand: vec![H2_TPH; hours] },
        scenarios: vec![scenario("base", wind_cf(hours, 1.0, 0.0), 1.0)],
        policy,
        hour_weight: None,
    }
}

/// Three resources: gas turbines and wind for the grid, contracted wind for
/// the project, with hourly matching at full compliance.
pub fn cost_recovery_case(beta: Option<f64>) -> SystemCase {
    let hours = WEEK;
    let mut policy = PolicyConfig::hourly(1.0);
    policy.excess_sales_beta = beta;
    SystemCase {
        label: "cost_recovery".into(),
        technologies: vec![
            thermal_ct(),
            defaults::onshore_wind("wind", "wind"),
            defaults::as_ppa(defaults::onshore_wind("w", "wind"), "ppa_wind"),
        ],
        fuels: defaults::fuels(),
        h2_project: Some(defaults::h2_project()),
        demand: DemandProfile { grid_load: grid_load(hours), h2_demand: vec![H2_TPH; hours] },
        scenarios: vec![scenario("base", wind_cf(hours, 1.0, 0.0), 1.0)],
        policy,
        hour_weight: None,
    }
}

/// Smallest interesting system: one dispatchable resource and a flat load.
pub fn single_generator(hours: usize, load: f64) -> SystemCase {
    let tech = TechnologySpec {
        id: "gen".into(),
        kind: TechKind::NuclearLike,
        existing_capacity: 1.0,
        crm_derate: 1.0,
        ..Default::default()
    };
    SystemCase {
        label: "single".into(),
        technologies: vec![tech],
        fuels: Vec::new(),
        h2_project: None,
        demand: DemandProfile { grid_load: vec![load; hours], h2_demand: vec![0.0; hours] },
        scenarios: vec![WeatherScenario { year_label: "y".into(), cf_by_group: BTreeMap::new(), weight: 1.0 }],
        policy: PolicyConfig { crm_alpha: None, ..PolicyConfig::default() },
        hour_weight: Some(1.0),
    }
}

/// Wind levels of the robustness fixture: three design years sharing one
/// wind shape, and two unseen years whose wind lies inside their envelope.
pub const DESIGN_YEARS: [(&str, f64); 3] = [("y1", 1.15), ("y2", 1.0), ("y3", 0.85)];
pub const OOS_YEARS: [(&str, f64); 2] = [("y4", 0.9), ("y5", 1.05)];

/// One week per `(label, wind level)` with uniform weights.
pub fn level_years(years: &[(&str, f64)]) -> Vec<WeatherScenario> {
    let w = 1.0 / years.len() as f64;
    years.iter().map(|&(label, level)| scenario(label, wind_cf(WEEK, level, 0.0), w)).collect()
}

/// Hand-sized case: one scenario, unit hour weight, no reserve margin and
/// one gas fuel at $2/MMBtu.
pub fn toy(
    label: &str,
    technologies: Vec<TechnologySpec>,
    load: Vec<f64>,
    cf: BTreeMap<String, Vec<f64>>,
) -> SystemCase {
    let hours = load.len();
    SystemCase {
        label: label.into(),
        technologies,
        fuels: vec![h2match_core::domain::FuelSpec { id: "gas".into(), price: 2.0, co2_factor: 0.05 }],
        h2_project: None,
        demand: DemandProfile { grid_load: load, h2_demand: vec![0.0; hours] },
        scenarios: vec![WeatherScenario { year_label: "y".into(), cf_by_group: cf, weight: 1.0 }],
        policy: PolicyConfig { crm_alpha: None, ..PolicyConfig::default() },
        hour_weight: Some(1.0),
    }
}

/// Always-available existing unit with no fuel.
pub fn firm(id: &str, mw: f64, vom: f64) -> TechnologySpec {
    TechnologySpec { id: id.into(), kind: TechKind::NuclearLike, existing_capacity: mw, vom, ..Default::default() }
}
