use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TechKind {
    /// Fuel-burning unit with linearized commitment.
    Thermal,
    /// Wind or solar; availability from a capacity-factor series.
    Vre,
    Battery,
    /// Weather-dependent dispatchable; availability from a series, optional minimum output.
    Hydro,
    /// Firm unit with constant availability and no commitment (nuclear, biomass).
    NuclearLike,
}

/// Cost and operating parameters of one generation or storage asset class.
///
/// Power quantities are MW, energy MWh, costs $ (annualized per year where
/// marked). Storage energy fields are ignored for non-storage kinds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TechnologySpec {
    pub id: String,
    pub kind: TechKind,
    /// Capacity-factor group for VRE and hydro (e.g. `new_wind`).
    pub vre_group: Option<String>,
    /// MW installed before the planning decision.
    pub existing_capacity: f64,
    /// MWh installed before the planning decision (storage).
    pub existing_energy_capacity: f64,
    pub expandable: bool,
    pub retirable: bool,
    /// Upper limit on total installed MW, if any.
    pub max_capacity: Option<f64>,
    /// $/MW/yr.
    pub inv_cost_power_annualized: f64,
    /// $/MWh/yr (storage).
    pub inv_cost_energy_annualized: f64,
    /// $/MW/yr.
    pub fom_power: f64,
    /// $/MWh/yr (storage).
    pub fom_energy: f64,
    /// $/MWh generated (discharged for storage).
    pub vom: f64,
    /// MMBtu/MWh.
    pub heat_rate: f64,
    pub fuel_id: Option<String>,
    /// Minimum output as a fraction of committed capacity (thermal) or of
    /// installed capacity (hydro, nuclear-like).
    pub min_stable_fraction: f64,
    /// Fraction of capacity per hour.
    pub ramp_up: f64,
    pub ramp_down: f64,
    /// $/start of one unit.
    pub start_cost: f64,
    /// MMBtu/start of one unit.
    pub start_fuel: f64,
    /// MW per unit, for the linearized commitment.
    pub unit_size: f64,
    /// Maximum hourly availability as a fraction of installed capacity.
    pub max_availability: f64,
    /// Capacity reserve derate.
    pub crm_derate: f64,
    /// Hours of energy per MW of power (battery).
    pub duration_min: f64,
    pub duration_max: f64,
    /// Fraction of stored energy lost per hour.
    pub self_discharge: f64,
    pub charge_efficiency: f64,
    pub discharge_efficiency: f64,
    /// Contracted by the hydrogen project to satisfy the time-matching requirement.
    pub is_ppa_eligible: bool,
    /// Counts toward the renewable portfolio standard.
    pub is_rps_eligible: bool,
}

impl Default for TechnologySpec {
    fn default() -> Self {
        Self {
            id: String::new(),
            kind: TechKind::Vre,
            vre_group: None,
            existing_capacity: 0.0,
            existing_energy_capacity: 0.0,
            expandable: false,
            retirable: false,
            max_capacity: None,
            inv_cost_power_annualized: 0.0,
            inv_cost_energy_annualized: 0.0,
            fom_power: 0.0,
            fom_energy: 0.0,
            vom: 0.0,
            heat_rate: 0.0,
            fuel_id: None,
            min_stable_fraction: 0.0,
            ramp_up: 1.0,
            ramp_down: 1.0,
            start_cost: 0.0,
            start_fuel: 0.0,
            unit_size: 1.0,
            max_availability: 1.0,
            crm_derate: 0.0,
            duration_min: 0.15,
            duration_max: 12.0,
            self_discharge: 2e-5,
            charge_efficiency: 0.92,
            discharge_efficiency: 0.92,
            is_ppa_eligible: false,
            is_rps_eligible: false,
        }
    }
}

impl TechnologySpec {
    pub fn is_storage(&self) -> bool {
        self.kind == TechKind::Battery
    }

    pub fn uses_cf(&self) -> bool {
        matches!(self.kind, TechKind::Vre | TechKind::Hydro)
    }

    /// Per-MW cost of a start: (start cost + start fuel x fuel price) / unit size.
    pub fn start_cost_per_mw(&self, fuel_price: f64) -> f64 {
        (self.start_cost + self.start_fuel * fuel_price) / self.unit_size
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FuelSpec {
    pub id: String,
    /// $/MMBtu.
    pub price: f64,
    /// tCO2/MMBtu.
    pub co2_factor: f64,
}

/// Electrolyzer, compressor and tank parameters of the hydrogen project.
///
/// Electrolyzer and compressor costs are quoted per MW of hydrogen (LHV);
/// the model converts them to its own capacity units with [`Self::lhv`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct H2ProjectSpec {
    /// MWh of electricity per tonne of H2.
    pub electrolyzer_power_per_tonne: f64,
    /// MWh of electricity per tonne of H2 compressed into storage.
    pub compressor_power_per_tonne: f64,
    /// $/MW_H2/yr.
    pub electrolyzer_inv_annualized: f64,
    /// $/MW_H2/yr.
    pub electrolyzer_fom: f64,
    /// $/tH2 produced.
    pub electrolyzer_vom: f64,
    /// $/tH2/yr of tank capacity.
    pub h2_store_inv_energy_annualized: f64,
    /// $/MW_H2/yr of compression throughput.
    pub compressor_inv_annualized: f64,
    /// Tonnes; `None` is unbounded.
    pub h2_store_cap_limit: Option<f64>,
    pub electrolyzer_min_output_fraction: f64,
    /// Fraction of capacity per hour.
    pub electrolyzer_ramp: f64,
    pub electrolyzer_availability: f64,
    /// Derate of electrolyzer consumption in the capacity reserve row.
    pub electrolyzer_crm_derate: f64,
    /// MWh per tonne (lower heating value), used for cost unit conversion.
    pub lhv: f64,
}

impl Default for H2ProjectSpec {
    fn default() -> Self {
        Self {
            electrolyzer_power_per_tonne: 54.3,
            compressor_power_per_tonne: 0.71,
            electrolyzer_inv_annualized: 142_586.0,
            electrolyzer_fom: 28_604.0,
            electrolyzer_vom: 0.0,
            h2_store_inv_energy_annualized: 33_929.0,
            compressor_inv_annualized: 220_490.0,
            h2_store_cap_limit: None,
            electrolyzer_min_output_fraction: 0.0,
            electrolyzer_ramp: 1.0,
            electrolyzer_availability: 1.0,
            electrolyzer_crm_derate: 1.0,
            lhv: 33.33,
        }
    }
}

impl H2ProjectSpec {
    /// Electricity drawn by the electrolyzer for a production rate in t/h.
    pub fn electrolyzer_draw(&self, tonnes_per_hour: f64) -> f64 {
        tonnes_per_hour * self.electrolyzer_power_per_tonne
    }

    /// Electrolyzer investment plus FOM per MW of electric input per year.
    pub fn electrolyzer_fixed_cost_per_mw_elec(&self) -> f64 {
        (self.electrolyzer_inv_annualized + self.electrolyzer_fom) * self.lhv / self.electrolyzer_power_per_tonne
    }

    /// Compressor investment per t/h of compression throughput per year.
    pub fn compressor_cost_per_tph(&self) -> f64 {
        self.compressor_inv_annualized * self.lhv
    }

    /// Tank limit expressed as hours of a constant demand rate.
    pub fn storage_limit_hours(hours: f64, demand_tph: f64) -> f64 {
        hours * demand_tph
    }
}
