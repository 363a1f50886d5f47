//! Reference technology and fuel parameters for the ERCOT case study.
//!
//! Annualized costs are taken as published where given. The gas turbines
//! have no published annualized value, so theirs are recovered from the
//! overnight cost at 4% over 30 years.

use super::{annuitize, FuelSpec, H2ProjectSpec, TechKind, TechnologySpec};

pub const DISCOUNT_RATE: f64 = 0.04;
pub const NATURAL_GAS: &str = "natural_gas";
pub const COAL: &str = "coal";
pub const URANIUM: &str = "uranium";
/// Baseload hydrogen demand of the case study, t/h.
pub const H2_BASELOAD_TPH: f64 = 18.4;

pub fn fuels() -> Vec<FuelSpec> {
    vec![
        FuelSpec { id: NATURAL_GAS.into(), price: 2.03, co2_factor: 0.05306 },
        FuelSpec { id: COAL.into(), price: 2.47, co2_factor: 0.09552 },
        FuelSpec { id: URANIUM.into(), price: 0.70, co2_factor: 0.0 },
    ]
}

pub fn solar(id: &str, group: &str) -> TechnologySpec {
    TechnologySpec {
        id: id.into(),
        kind: TechKind::Vre,
        vre_group: Some(group.into()),
        expandable: true,
        inv_cost_power_annualized: 47_606.0,
        fom_power: 21_000.0,
        crm_derate: 0.8,
        is_rps_eligible: true,
        ..Default::default()
    }
}

pub fn onshore_wind(id: &str, group: &str) -> TechnologySpec {
    TechnologySpec {
        id: id.into(),
        kind: TechKind::Vre,
        vre_group: Some(group.into()),
        expandable: true,
        inv_cost_power_annualized: 57_807.0,
        fom_power: 44_100.0,
        crm_derate: 0.8,
        is_rps_eligible: true,
        ..Default::default()
    }
}

pub fn li_ion_battery(id: &str) -> TechnologySpec {
    TechnologySpec {
        id: id.into(),
        kind: TechKind::Battery,
        expandable: true,
        inv_cost_power_annualized: 16_064.0,
        inv_cost_energy_annualized: 18_642.0,
        fom_power: 6_379.0,
        fom_energy: 7_403.0,
        vom: 1.0,
        crm_derate: 0.8,
        duration_min: 0.15,
        duration_max: 12.0,
        self_discharge: 2e-5,
        ..Default::default()
    }
}

pub fn ngct(id: &str) -> TechnologySpec {
    TechnologySpec {
        id: id.into(),
        kind: TechKind::Thermal,
        expandable: true,
        retirable: true,
        inv_cost_power_annualized: annuitize(950_249.0, 30.0, DISCOUNT_RATE).unwrap_or(0.0),
        fom_power: 11_849.0,
        vom: 5.0,
        heat_rate: 9.71,
        fuel_id: Some(NATURAL_GAS.into()),
        start_fuel: 815.5,
        start_cost: 27_028.0,
        unit_size: 100.0,
        min_stable_fraction: 0.0,
        max_availability: 0.9,
        crm_derate: 0.93,
        ..Default::default()
    }
}

pub fn ngcc(id: &str) -> TechnologySpec {
    TechnologySpec {
        id: id.into(),
        kind: TechKind::Thermal,
        expandable: true,
        retirable: true,
        inv_cost_power_annualized: annuitize(1_080_449.0, 30.0, DISCOUNT_RATE).unwrap_or(0.0),
        fom_power: 13_513.0,
        vom: 2.0,
        heat_rate: 6.36,
        fuel_id: Some(NATURAL_GAS.into()),
        start_fuel: 1454.0,
        start_cost: 64_703.0,
        unit_size: 500.0,
        min_stable_fraction: 0.3,
        max_availability: 0.9,
        crm_derate: 0.93,
        ..Default::default()
    }
}

pub fn h2_project() -> H2ProjectSpec {
    H2ProjectSpec::default()
}

/// Marks a copy of `tech` as contracted by the hydrogen project.
pub fn as_ppa(mut tech: TechnologySpec, id: &str) -> TechnologySpec {
    tech.id = id.into();
    tech.is_ppa_eligible = true;
    tech.is_rps_eligible = false;
    tech.crm_derate = 0.0;
    tech.existing_capacity = 0.0;
    tech.retirable = false;
    tech
}
