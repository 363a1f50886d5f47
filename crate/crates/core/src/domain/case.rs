use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{FuelSpec, H2ProjectSpec, PolicyConfig, TechKind, TechnologySpec, TmrKind};

pub const HOURS_PER_YEAR: usize = 8760;

/// One weather year: capacity-factor series per VRE group and its probability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeatherScenario {
    pub year_label: String,
    pub cf_by_group: BTreeMap<String, Vec<f64>>,
    pub weight: f64,
}

/// Hourly grid load (MW) and hydrogen demand (t/h).
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct DemandProfile {
    pub grid_load: Vec<f64>,
    pub h2_demand: Vec<f64>,
}

impl DemandProfile {
    pub fn hours(&self) -> usize {
        self.grid_load.len()
    }

    pub fn peak_load(&self) -> f64 {
        self.grid_load.iter().copied().fold(0.0, f64::max)
    }
}

/// A complete problem instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemCase {
    pub label: String,
    pub technologies: Vec<TechnologySpec>,
    pub fuels: Vec<FuelSpec>,
    pub h2_project: Option<H2ProjectSpec>,
    pub demand: DemandProfile,
    pub scenarios: Vec<WeatherScenario>,
    pub policy: PolicyConfig,
    /// Multiplier that scales one modeled hour to annual quantities; defaults
    /// to 8760 / hours so that short horizons stand in for a full year.
    pub hour_weight: Option<f64>,
}

impl SystemCase {
    pub fn hours(&self) -> usize {
        self.demand.hours()
    }

    pub fn hour_weight(&self) -> f64 {
        self.hour_weight.unwrap_or_else(|| HOURS_PER_YEAR as f64 / self.hours().max(1) as f64)
    }

    pub fn fuel(&self, id: &str) -> Option<&FuelSpec> {
        self.fuels.iter().find(|f| f.id == id)
    }

    pub fn fuel_price(&self, tech: &TechnologySpec) -> f64 {
        tech.fuel_id.as_deref().and_then(|f| self.fuel(f)).map_or(0.0, |f| f.price)
    }

    pub fn tech(&self, id: &str) -> Option<&TechnologySpec> {
        self.technologies.iter().find(|t| t.id == id)
    }

    /// Capacity factor of `tech` in scenario `s`, hour `t` (1.0 when the
    /// technology has no series).
    pub fn cf(&self, tech: &TechnologySpec, s: usize, t: usize) -> f64 {
        match &tech.vre_group {
            Some(g) if tech.uses_cf() => self.scenarios[s].cf_by_group[g][t],
            _ => 1.0,
        }
    }

    /// Same case without the hydrogen project or any matching requirement.
    pub fn without_h2(&self) -> SystemCase {
        let mut c = self.clone();
        c.h2_project = None;
        c.demand.h2_demand = vec![0.0; c.hours()];
        c.policy.tmr = TmrKind::None;
        c.policy.excess_sales_beta = None;
        c.policy.rps_covers_h2 = false;
        c.technologies.retain(|t| !t.is_ppa_eligible);
        c
    }
}

/// One broken rule, addressed by a dotted field path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub field: String,
    pub rule: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.rule)
    }
}

struct Checker {
    out: Vec<Violation>,
}

impl Checker {
    fn push(&mut self, field: impl Into<String>, rule: impl Into<String>) {
        self.out.push(Violation { field: field.into(), rule: rule.into() });
    }

    fn nonneg(&mut self, field: String, v: f64) {
        if !v.is_finite() || v < 0.0 {
            self.push(field, format!("must be finite and >= 0 (got {v})"));
        }
    }

    fn fraction(&mut self, field: String, v: f64) {
        if !(0.0..=1.0).contains(&v) {
            self.push(field, format!("must be a fraction in [0, 1] (got {v})"));
        }
    }

    fn series(&mut self, field: String, s: &[f64], hours: usize, unit_interval: bool) {
        if s.len() != hours {
            self.push(field, format!("has {} hours, expected {hours}", s.len()));
            return;
        }
        if let Some((t, v)) = s.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0) {
            self.push(field, format!("hour {} is {v}; values must be finite and >= 0", t + 1));
        } else if unit_interval {
            if let Some((t, v)) = s.iter().enumerate().find(|(_, v)| **v > 1.0) {
                self.push(field, format!("hour {} is {v}; capacity factors must be <= 1", t + 1));
            }
        }
    }
}

/// Checks every type invariant and the internal consistency of the policy.
/// Returns an empty list for a well-formed case.
pub fn validate_case(case: &SystemCase) -> Vec<Violation> {
    let mut c = Checker { out: Vec::new() };
    let hours = case.hours();

    if case.label.trim().is_empty() {
        c.push("label", "must not be empty");
    }
    if hours == 0 {
        c.push("demand.grid_load", "must contain at least one hour");
    }
    if let Some(w) = case.hour_weight {
        if !w.is_finite() || w <= 0.0 {
            c.push("hour_weight", format!("must be > 0 (got {w})"));
        }
    }

    let mut fuel_ids = HashSet::new();
    for f in &case.fuels {
        if !fuel_ids.insert(f.id.as_str()) {
            c.push(format!("fuels[{}]", f.id), "duplicate fuel id");
        }
        c.nonneg(format!("fuels[{}].price", f.id), f.price);
        c.nonneg(format!("fuels[{}].co2_factor", f.id), f.co2_factor);
    }

    let mut tech_ids = HashSet::new();
    for t in &case.technologies {
        let p = |f: &str| format!("technologies[{}].{f}", t.id);
        if t.id.is_empty() {
            c.push("technologies[]", "technology id must not be empty");
        }
        if !tech_ids.insert(t.id.as_str()) {
            c.push(format!("technologies[{}]", t.id), "duplicate technology id");
        }
        for (name, v) in [
            ("existing_capacity", t.existing_capacity),
            ("existing_energy_capacity", t.existing_energy_capacity),
            ("inv_cost_power_annualized", t.inv_cost_power_annualized),
            ("inv_cost_energy_annualized", t.inv_cost_energy_annualized),
            ("fom_power", t.fom_power),
            ("fom_energy", t.fom_energy),
            ("vom", t.vom),
            ("heat_rate", t.heat_rate),
            ("start_cost", t.start_cost),
            ("start_fuel", t.start_fuel),
            ("duration_min", t.duration_min),
            ("duration_max", t.duration_max),
        ] {
            c.nonneg(p(name), v);
        }
        for (name, v) in [
            ("min_stable_fraction", t.min_stable_fraction),
            ("ramp_up", t.ramp_up),
            ("ramp_down", t.ramp_down),
            ("max_availability", t.max_availability),
            ("crm_derate", t.crm_derate),
            ("self_discharge", t.self_discharge),
            ("charge_efficiency", t.charge_efficiency),
            ("discharge_efficiency", t.discharge_efficiency),
        ] {
            c.fraction(p(name), v);
        }
        if t.is_storage() && (t.charge_efficiency <= 0.0 || t.discharge_efficiency <= 0.0) {
            c.push(p("charge_efficiency"), "storage efficiencies must be > 0");
        }
        if t.duration_min > t.duration_max {
            c.push(p("duration_min"), "duration_min must not exceed duration_max");
        }
        if !(t.unit_size > 0.0 && t.unit_size.is_finite()) {
            c.push(p("unit_size"), "must be > 0");
        }
        if let Some(m) = t.max_capacity {
            if !(m >= t.existing_capacity) {
                c.push(p("max_capacity"), "must be >= existing_capacity");
            }
        }
        if t.is_ppa_eligible && t.is_rps_eligible {
            c.push(
                format!("technologies[{}]", t.id),
                "is both PPA- and RPS-eligible; clean energy attributes would be double counted",
            );
        }
        if t.kind == TechKind::Thermal {
            if t.heat_rate <= 0.0 {
                c.push(p("heat_rate"), "thermal technologies need heat_rate > 0");
            }
            if t.fuel_id.is_none() {
                c.push(p("fuel_id"), "thermal technologies need a fuel");
            }
        }
        if let Some(f) = &t.fuel_id {
            if !fuel_ids.contains(f.as_str()) {
                c.push(p("fuel_id"), format!("unknown fuel `{f}`"));
            }
        }
        if t.uses_cf() {
            match &t.vre_group {
                None => c.push(p("vre_group"), "VRE and hydro technologies need a capacity-factor group"),
                Some(g) => {
                    for s in &case.scenarios {
                        if !s.cf_by_group.contains_key(g) {
                            c.push(
                                format!("scenarios[{}].cf.{g}", s.year_label),
                                format!("missing capacity-factor series for group `{g}`"),
                            );
                        }
                    }
                }
            }
        }
        if t.is_ppa_eligible && !matches!(t.kind, TechKind::Vre | TechKind::Battery) {
            c.push(p("is_ppa_eligible"), "only VRE and battery resources can be contracted");
        }
    }

    if let Some(h) = &case.h2_project {
        let p = |f: &str| format!("h2_project.{f}");
        if !(h.electrolyzer_power_per_tonne > 0.0) {
            c.push(p("electrolyzer_power_per_tonne"), "must be > 0");
        }
        if !(h.lhv > 0.0) {
            c.push(p("lhv"), "must be > 0");
        }
        for (name, v) in [
            ("compressor_power_per_tonne", h.compressor_power_per_tonne),
            ("electrolyzer_inv_annualized", h.electrolyzer_inv_annualized),
            ("electrolyzer_fom", h.electrolyzer_fom),
            ("electrolyzer_vom", h.electrolyzer_vom),
            ("h2_store_inv_energy_annualized", h.h2_store_inv_energy_annualized),
            ("compressor_inv_annualized", h.compressor_inv_annualized),
        ] {
            c.nonneg(p(name), v);
        }
        if let Some(l) = h.h2_store_cap_limit {
            c.nonneg(p("h2_store_cap_limit"), l);
        }
        for (name, v) in [
            ("electrolyzer_min_output_fraction", h.electrolyzer_min_output_fraction),
            ("electrolyzer_ramp", h.electrolyzer_ramp),
            ("electrolyzer_availability", h.electrolyzer_availability),
            ("electrolyzer_crm_derate", h.electrolyzer_crm_derate),
        ] {
            c.fraction(p(name), v);
        }
    }

    c.series("demand.grid_load".into(), &case.demand.grid_load, hours, false);
    c.series("demand.h2_demand".into(), &case.demand.h2_demand, hours, false);
    if case.h2_project.is_none() && case.demand.h2_demand.iter().any(|&d| d > 0.0) {
        c.push("h2_project", "hydrogen demand is set but no hydrogen project is defined");
    }

    if case.scenarios.is_empty() {
        c.push("scenarios", "at least one weather scenario is required");
    }
    let mut labels = HashSet::new();
    let mut total_weight = 0.0;
    for s in &case.scenarios {
        if !labels.insert(s.year_label.as_str()) {
            c.push(format!("scenarios[{}]", s.year_label), "duplicate scenario label");
        }
        c.nonneg(format!("scenarios[{}].weight", s.year_label), s.weight);
        total_weight += s.weight;
        for (g, series) in &s.cf_by_group {
            c.series(format!("scenarios[{}].cf.{g}", s.year_label), series, hours, true);
        }
    }
    if !case.scenarios.is_empty() && (total_weight - 1.0).abs() > 1e-6 {
        c.push("scenarios.weight", format!("scenario weights must sum to 1 (sum is {total_weight})"));
    }

    let pol = &case.policy;
    if !(pol.alpha_tmr > 0.0 && pol.alpha_tmr <= 1.0) {
        c.push("policy.alpha_tmr", format!("must be in (0, 1] (got {})", pol.alpha_tmr));
    }
    if let Some(b) = pol.excess_sales_beta {
        c.nonneg("policy.excess_sales_beta".into(), b);
        if pol.tmr != TmrKind::Hourly {
            c.push("policy.excess_sales_beta", "the excess-sales cap applies only with hourly matching");
        }
    }
    if let Some(k) = pol.rps_kappa {
        if !(0.0..1.0).contains(&k) {
            c.push("policy.rps_kappa", format!("must be in [0, 1) (got {k})"));
        }
        let eligible = case.technologies.iter().any(|t| t.is_rps_eligible);
        if k > 0.0 && !eligible && pol.penalties.rps_slack <= 0.0 {
            c.push("policy.rps_kappa", "no RPS-eligible resource and no slack penalty: the standard cannot be met");
        }
    }
    if pol.rps_covers_h2 && pol.rps_kappa.is_none() {
        c.push("policy.rps_covers_h2", "requires policy.rps_kappa");
    }
    if let Some(a) = pol.crm_alpha {
        c.nonneg("policy.crm_alpha".into(), a);
    }
    for (name, v) in [
        ("voll", pol.penalties.voll),
        ("unserved_h2", pol.penalties.unserved_h2),
        ("rps_slack", pol.penalties.rps_slack),
        ("tmr_slack", pol.penalties.tmr_slack),
    ] {
        c.nonneg(format!("policy.penalties.{name}"), v);
    }
    if pol.tmr != TmrKind::None {
        if case.h2_project.is_none() {
            c.push("policy.tmr", "a matching requirement needs h2_project");
        }
        if !case.technologies.iter().any(|t| t.is_ppa_eligible) {
            c.push("policy.tmr", "a matching requirement needs at least one PPA-eligible resource");
        }
    }
    c.out
}
