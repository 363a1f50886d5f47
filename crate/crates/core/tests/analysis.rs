mod common;

use std::collections::BTreeMap;

use common::fixtures::*;
use h2match_core::analysis::{
    build_report, consequential_emissions, curtailment, eac_cost, emissions_delta_per_tonne, emissions_total, lcoh,
    price_report, revenue_stack, robustness_from_series, CaseReport, Histogram, Prices, Solved,
};
use h2match_core::domain::{defaults, H2ProjectSpec, PolicyConfig, SystemCase, TechKind, TechnologySpec};
use h2match_core::lp::{solve, Solution, SolveOptions};
use h2match_core::model::{assemble, Mode, Model};
use proptest::prelude::*;

fn solved(case: &SystemCase) -> (Model, Solution) {
    let model = assemble(case, Mode::Deterministic).unwrap();
    let sol = solve(&model.lp, &SolveOptions::default()).unwrap();
    assert!(sol.is_optimal(), "{}: {:?}", case.label, sol.status);
    (model, sol)
}

fn report(case: &SystemCase) -> CaseReport {
    let (model, sol) = solved(case);
    build_report(&Solved::new(case, &model, &sol).unwrap(), &case.label, 1e-6).unwrap()
}

fn expandable(id: &str, inv: f64, vom: f64) -> TechnologySpec {
    TechnologySpec { expandable: true, inv_cost_power_annualized: inv, ..firm(id, 0.0, vom) }
}

#[test]
fn certificate_costs_match_the_quoted_figures() {
    assert!((eac_cost(54.3, 0.6, 25.7) - 0.84).abs() < 0.005);
    assert!((eac_cost(54.3, 1.0, 26.0) - 1.4).abs() < 0.015);
    assert_eq!(eac_cost(54.3, 0.0, 26.0), 0.0);
}

#[test]
fn robustness_counts_unmet_hours_and_their_share() {
    let r = robustness_from_series(&[10.0, 0.0, 5.0], &[100.0, 100.0, 50.0], 1e-6);
    assert_eq!(r.unmet_hours, 2);
    assert!((r.unmatched_share - 0.10).abs() < 1e-12);
    let none = robustness_from_series(&[0.0; 3], &[100.0; 3], 1e-6);
    assert_eq!((none.unmet_hours, none.unmatched_share), (0, 0.0));
}

#[test]
fn histogram_puts_spikes_in_the_open_bin() {
    let mut values = vec![0.0; 8759];
    values.push(300.0);
    let h = Histogram::of(&values);
    assert_eq!(h.mass.len(), 26);
    assert_eq!(h.mass[0], 8759.0);
    assert_eq!(h.mass[25], 1.0);
    assert_eq!(h.mass.iter().sum::<f64>(), 8760.0);
    assert_eq!(h.labels()[25], "250+");
    assert_eq!(h.labels()[0], "0-10");
}

#[test]
fn constant_duals_average_to_the_constant() {
    let prices = Prices {
        weights: vec![2.0, 2.0],
        energy: vec![vec![2.0 * 31.0; 4]; 2],
        capacity: Some(vec![vec![2.0 * 5.0; 4]; 2]),
        rps: Some(vec![2.0 * 7.0; 2]),
        tmr_hourly: None,
        tmr_annual: None,
        excess_cap: None,
    };
    let r = price_report(&prices, &[1.0, 4.0, 2.0, 3.0], 2.0);
    assert!((r.avg_energy_price - 31.0).abs() < 1e-12);
    assert!((r.avg_capacity_price - 5.0).abs() < 1e-12);
    assert!((r.annual_capacity_price - 5.0 * 4.0 * 2.0).abs() < 1e-12);
    assert!((r.rps_price - 7.0).abs() < 1e-12);
    assert_eq!(r.tmr_price, 0.0);
    assert!(r.tmr_histogram.is_none());
}

#[test]
fn one_megawatt_hour_of_combined_cycle_emits_its_heat_rate_times_factor() {
    let mut ngcc = defaults::ngcc("ngcc");
    ngcc.existing_capacity = 10.0;
    ngcc.expandable = false;
    ngcc.retirable = false;
    let mut case = toy("ngcc", vec![ngcc], vec![1.0], BTreeMap::new());
    case.fuels = defaults::fuels();
    let (model, sol) = solved(&case);
    let e = emissions_total(&Solved::new(&case, &model, &sol).unwrap());
    assert!((e - 6.36 * 0.05306).abs() < 1e-9, "{e}");
    assert!((e - 0.33746).abs() < 1e-5);
}

#[test]
fn renewable_dispatch_emits_nothing() {
    let wind = TechnologySpec { kind: TechKind::Vre, vre_group: Some("wind".into()), ..firm("w", 10.0, 0.0) };
    let cf = BTreeMap::from([("wind".to_string(), vec![0.6, 0.9])]);
    let case = toy("vre", vec![wind], vec![5.0, 5.0], cf);
    let (model, sol) = solved(&case);
    assert_eq!(emissions_total(&Solved::new(&case, &model, &sol).unwrap()), 0.0);
}

#[test]
fn three_generator_emissions_match_an_hour_by_hour_tally() {
    let gas = |id: &str, mw: f64, hr: f64, vom: f64| TechnologySpec {
        id: id.into(),
        kind: TechKind::Thermal,
        existing_capacity: mw,
        heat_rate: hr,
        fuel_id: Some("gas".into()),
        vom,
        unit_size: mw,
        min_stable_fraction: 0.4,
        start_fuel: 20.0,
        start_cost: 100.0,
        ..Default::default()
    };
    let case = toy(
        "three",
        vec![firm("base", 30.0, 1.0), gas("mid", 40.0, 7.0, 3.0), gas("peak", 40.0, 11.0, 8.0)],
        vec![20.0, 60.0, 95.0, 50.0, 25.0],
        BTreeMap::new(),
    );
    let (model, sol) = solved(&case);
    let mut tally = 0.0;
    for (spec, tv) in case.technologies.iter().zip(&model.vars.techs) {
        let Some(c) = &tv.commit else { continue };
        for t in 0..case.hours() {
            tally += sol.primal[tv.gen.at(0, t).0] * spec.heat_rate * 0.05;
            tally += sol.primal[c.start.at(0, t).0] * spec.start_fuel / spec.unit_size * 0.05;
        }
    }
    let e = emissions_total(&Solved::new(&case, &model, &sol).unwrap());
    assert!(tally > 0.0);
    assert!((e - tally).abs() < 1e-9 * tally, "{e} vs {tally}");
}

#[test]
fn consequential_emissions_is_the_per_tonne_difference() {
    assert!((emissions_delta_per_tonne(150.0, 50.0, 50.0).unwrap() - 2.0).abs() < 1e-12);
    assert_eq!(emissions_delta_per_tonne(80.0, 80.0, 5.0).unwrap(), 0.0);
    assert!(emissions_delta_per_tonne(1.0, 0.0, 0.0).is_err());

    let case = cost_recovery_case(Some(0.2));
    let with = report(&case);
    let without = report(&case.without_h2());
    let tonnes = with.h2_production_t;
    let c = consequential_emissions(&with, &without, tonnes).unwrap();
    assert!((c - (with.emissions_t - without.emissions_t) / tonnes).abs() < 1e-12);
    assert_eq!(consequential_emissions(&without, &with, tonnes).unwrap(), -c);
}

proptest! {
    #[test]
    fn swapping_runs_flips_the_sign(a in 0.0f64..1e7, b in 0.0f64..1e7, t in 1e-3f64..1e6) {
        let fwd = emissions_delta_per_tonne(a, b, t).unwrap();
        let back = emissions_delta_per_tonne(b, a, t).unwrap();
        prop_assert_eq!(fwd, -back);
    }
}

/// One day of flat hydrogen production served by free firm power.
fn electrolyzer_only(project: H2ProjectSpec, tph: f64) -> SystemCase {
    let mut case = toy("ely", vec![firm("free", 1e4, 0.0)], vec![100.0; 24], BTreeMap::new());
    case.h2_project = Some(project);
    case.demand.h2_demand = vec![tph; 24];
    case.hour_weight = Some(8760.0 / 24.0);
    case
}

#[test]
fn costless_project_breaks_even_at_zero() {
    let project = H2ProjectSpec {
        electrolyzer_inv_annualized: 0.0,
        electrolyzer_fom: 0.0,
        h2_store_inv_energy_annualized: 0.0,
        compressor_inv_annualized: 0.0,
        ..Default::default()
    };
    let case = electrolyzer_only(project, 2.0);
    let (model, sol) = solved(&case);
    let v = Solved::new(&case, &model, &sol).unwrap();
    let b = lcoh(&v, &Prices::extract(&sol, &model).unwrap()).unwrap();
    assert_eq!(b.lcoh, 0.0);
}

#[test]
fn electrolyzer_fixed_om_alone_sets_the_break_even_price() {
    let project = H2ProjectSpec {
        electrolyzer_inv_annualized: 0.0,
        h2_store_inv_energy_annualized: 0.0,
        compressor_inv_annualized: 0.0,
        ..Default::default()
    };
    let tph = 0.0552;
    let case = electrolyzer_only(project, tph);
    let (model, sol) = solved(&case);
    let v = Solved::new(&case, &model, &sol).unwrap();
    let b = lcoh(&v, &Prices::extract(&sol, &model).unwrap()).unwrap();
    // FOM is quoted per MW of hydrogen: the flat plant is tph x LHV MW_H2.
    let plant_mw_h2 = tph * 33.33;
    let hand = 28_604.0 * plant_mw_h2 / (tph * 8760.0 * 1000.0);
    assert!((b.lcoh - hand).abs() < 1e-9, "{} vs {hand}", b.lcoh);
    assert!((b.h2_tonnes - tph * 8760.0).abs() < 1e-6);
}

#[test]
fn zero_production_has_no_break_even_price() {
    let mut case = electrolyzer_only(H2ProjectSpec::default(), 1.0);
    case.demand.h2_demand = vec![0.0; 24];
    let (model, sol) = solved(&case);
    let v = Solved::new(&case, &model, &sol).unwrap();
    assert!(lcoh(&v, &Prices::extract(&sol, &model).unwrap()).is_err());
}

#[test]
fn free_contracted_surplus_leaves_annual_matching_unpriced() {
    let ppa = TechnologySpec {
        kind: TechKind::Vre,
        vre_group: Some("wind".into()),
        is_ppa_eligible: true,
        ..firm("ppa", 2000.0, 0.0)
    };
    let cf = BTreeMap::from([("wind".to_string(), vec![1.0, 0.5])]);
    let mut case = toy("annual", vec![ppa, firm("free", 5000.0, 0.0)], vec![1000.0, 1000.0], cf);
    case.h2_project = Some(defaults::h2_project());
    case.demand.h2_demand = vec![5.0; 2];
    case.policy = PolicyConfig { crm_alpha: None, ..PolicyConfig::annual() };
    let r = report(&case);
    assert_eq!(r.prices.tmr_price, 0.0);
}

/// Two hours, load 5 then 15 MW: a 10 MW existing unit at $10/MWh and an
/// expandable peaker at $1000/MW-yr plus $50/MWh.
fn two_hour_market() -> SystemCase {
    toy(
        "market",
        vec![firm("base", 10.0, 10.0), expandable("peak", 1000.0, 50.0), expandable("idle", 1e6, 1e3)],
        vec![5.0, 15.0],
        BTreeMap::new(),
    )
}

#[test]
fn revenue_stacks_match_the_hand_solved_prices() {
    let case = two_hour_market();
    let (model, sol) = solved(&case);
    let prices = Prices::extract(&sol, &model).unwrap();
    // base is marginal in hour 0; the peaker's capacity and fuel in hour 1
    assert!((prices.energy[0][0] - 10.0).abs() < 1e-9);
    assert!((prices.energy[0][1] - 1050.0).abs() < 1e-9);

    let stacks = revenue_stack(&Solved::new(&case, &model, &sol).unwrap(), &prices).unwrap();
    let ids: Vec<&str> = stacks.iter().map(|s| s.id.as_str()).collect();
    assert_eq!(ids, ["base", "peak"], "unbuilt resources are left out");
    let (base, peak) = (&stacks[0], &stacks[1]);
    assert!((base.electricity_sales - (10.0 * 5.0 + 1050.0 * 10.0) / 10.0).abs() < 1e-9);
    assert!((base.total_cost - 10.0 * 15.0 / 10.0).abs() < 1e-9);
    assert!((peak.installed_mw - 5.0).abs() < 1e-9);
    assert!((peak.electricity_sales - 1050.0).abs() < 1e-9);
    assert!((peak.total_cost - (1000.0 * 5.0 + 50.0 * 5.0) / 5.0).abs() < 1e-9);
    for s in &stacks {
        assert_eq!((s.capacity_reserve, s.rps, s.tmr), (0.0, 0.0, 0.0));
        assert!(s.net() >= -1e-9, "{}: {}", s.id, s.net());
    }
}

#[test]
fn with_only_new_capacity_payments_equal_system_cost() {
    let case = toy(
        "zero_profit",
        vec![expandable("cheap", 100.0, 10.0), expandable("peak", 1000.0, 50.0)],
        vec![5.0, 15.0, 9.0],
        BTreeMap::new(),
    );
    let (model, sol) = solved(&case);
    let prices = Prices::extract(&sol, &model).unwrap();
    let payments: f64 = case.demand.grid_load.iter().zip(&prices.energy[0]).map(|(d, p)| d * p).sum();
    assert!((payments - sol.objective).abs() < 1e-6 * sol.objective, "{payments} vs {}", sol.objective);
    let stacks = revenue_stack(&Solved::new(&case, &model, &sol).unwrap(), &prices).unwrap();
    for s in &stacks {
        assert!(s.net().abs() < 1e-6 * s.total_cost, "{}: {}", s.id, s.net());
    }
}

#[test]
fn curtailment_is_the_unused_share_of_available_energy() {
    let wind = TechnologySpec { kind: TechKind::Vre, vre_group: Some("wind".into()), ..firm("w", 10.0, 0.0) };
    let cf = BTreeMap::from([("wind".to_string(), vec![0.5, 1.0])]);
    let short = toy("short", vec![wind.clone(), firm("f", 50.0, 20.0)], vec![20.0, 20.0], cf.clone());
    let (model, sol) = solved(&short);
    assert_eq!(curtailment(&Solved::new(&short, &model, &sol).unwrap())["w"], 0.0);

    let long = toy("long", vec![wind, firm("f", 50.0, 20.0)], vec![2.0, 2.0], cf);
    let (model, sol) = solved(&long);
    let c = curtailment(&Solved::new(&long, &model, &sol).unwrap())["w"];
    assert!((c - 11.0 / 15.0).abs() < 1e-9, "{c}");
}

#[test]
fn report_fields_agree_with_each_other() {
    let r = report(&cost_recovery_case(Some(0.2)));
    assert!(r.h2_production_t > 0.0);
    let b = r.lcoh.as_ref().unwrap();
    assert!((b.lcoh - b.net_cost() / (b.h2_tonnes * 1000.0)).abs() < 1e-12);
    assert_eq!(b.h2_tonnes, r.h2_production_t);
    assert!(r.curtailment.values().all(|c| (0.0..=1.0).contains(c)));
    assert!(r.robustness.is_none(), "design runs carry no matching slack");
    assert!(r.revenue.iter().all(|s| s.installed_mw > 1e-6));
}
