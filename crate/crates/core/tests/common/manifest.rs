//! A one-day experiment manifest small enough to run end to end in tests.

use std::f64::consts::PI;
use std::fmt::Write;
use std::path::{Path, PathBuf};

fn series(v: impl Iterator<Item = f64>) -> String {
    let items: Vec<String> = v.map(|x| format!("{x:.4}")).collect();
    format!("[{}]", items.join(", "))
}

fn wind(level: f64, phase: f64) -> String {
    series((0..24).map(move |t| (level * (0.5 + 0.35 * (2.0 * PI * t as f64 / 24.0 + phase).sin())).clamp(0.0, 1.0)))
}

fn solar() -> String {
    series((0..24).map(|t| if (6..18).contains(&t) { 0.8 * (PI * (t as f64 - 6.0) / 12.0).sin() } else { 0.0 }))
}

/// Manifest text: a gas fleet, grid wind, contracted wind and solar, two
/// design days (`a`, `b`) and two out-of-sample days (`a_again`, a copy of
/// `a`, and the calmer `c`).
pub fn small_manifest() -> String {
    let load = series((0..24).map(|t| 800.0 + 150.0 * (2.0 * PI * (t as f64 - 14.0) / 24.0).cos()));
    let mut s = String::new();
    writeln!(
        s,
        r#"[case]
label = "small"
demand = {{ grid_load = {load}, h2_constant = 2.0 }}

[[case.fuels]]
id = "gas"
price = 2.03
co2_factor = 0.05306

[[case.technologies]]
id = "gas"
kind = "thermal"
existing_capacity = 1400.0
fom_power = 13513.0
vom = 2.0
heat_rate = 7.5
fuel_id = "gas"
unit_size = 100.0
max_availability = 0.95
crm_derate = 0.93

[[case.technologies]]
id = "wind"
kind = "vre"
vre_group = "wind"
expandable = true
inv_cost_power_annualized = 57807.0
fom_power = 44100.0
crm_derate = 0.8
is_rps_eligible = true

[[case.technologies]]
id = "ppa_wind"
kind = "vre"
vre_group = "wind"
expandable = true
inv_cost_power_annualized = 57807.0
fom_power = 44100.0
is_ppa_eligible = true

[[case.technologies]]
id = "ppa_solar"
kind = "vre"
vre_group = "solar"
expandable = true
inv_cost_power_annualized = 47606.0
fom_power = 21000.0
is_ppa_eligible = true

[case.h2_project]
"#
    )
    .unwrap();
    for (label, level, phase) in [("a", 1.1, 0.0), ("b", 0.9, 1.5)] {
        writeln!(
            s,
            "[[case.scenarios]]\nlabel = \"{label}\"\ncf = {{ wind = {}, solar = {} }}\n",
            wind(level, phase),
            solar()
        )
        .unwrap();
    }
    for (label, level, phase) in [("a_again", 1.1, 0.0), ("c", 0.7, 0.7)] {
        writeln!(
            s,
            "[[oos_scenarios]]\nlabel = \"{label}\"\ncf = {{ wind = {}, solar = {} }}\n",
            wind(level, phase),
            solar()
        )
        .unwrap();
    }
    s.push_str(
        r#"[solver]
seed = 3

[[run]]
label = "No_H2"
mode = "baseline"

[[run]]
label = "S-A"
mode = "stochastic"
baseline = "No_H2"
policy = { tmr = "annual" }

[[run]]
label = "S-H"
mode = "stochastic"
baseline = "No_H2"
policy = { tmr = "hourly", alpha_tmr = 1.0, excess_sales_beta = 0.2 }

[[run]]
label = "OOS-S-H"
mode = "oos_dispatch"
design = "S-H"
"#,
    );
    s
}

/// Writes `text` as `manifest.toml` in `dir`.
pub fn write_manifest(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("manifest.toml");
    std::fs::write(&path, text).unwrap();
    path
}
