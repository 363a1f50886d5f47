mod common;

use common::fixtures::*;
use h2match_core::domain::{annuitize, defaults, load_case, validate_case, H2ProjectSpec, PolicyConfig, TmrKind};
use proptest::prelude::*;

/// Present value of `n` equal payments discounted at `r`, summed year by year.
fn present_value(payment: f64, n: u32, r: f64) -> f64 {
    (1..=n).map(|k| payment / (1.0 + r).powi(k as i32)).sum()
}

#[test]
fn annualized_costs_match_the_published_table() {
    for (capex, life, expected) in
        [(1_937_791.0, 20.0, 142_586.0), (2_451_496.0, 15.0, 220_490.0), (587_000.0, 30.0, 33_929.0)]
    {
        let a = annuitize(capex, life, 0.04).unwrap();
        assert!((a - expected).abs() / expected < 0.005, "{capex}: {a}");
    }
}

#[test]
fn single_year_at_zero_rate_is_the_capex() {
    assert_eq!(annuitize(1000.0, 1.0, 0.0).unwrap(), 1000.0);
}

proptest! {
    #[test]
    fn payments_repay_the_capex(capex in 1.0f64..1e7, life in 1u32..60, rate in 0.001f64..0.2) {
        let a = annuitize(capex, life as f64, rate).unwrap();
        let pv = present_value(a, life, rate);
        prop_assert!((pv - capex).abs() <= 1e-9 * capex, "pv {pv} capex {capex}");
    }

    #[test]
    fn payment_rises_with_rate_and_falls_with_lifetime(
        capex in 1.0f64..1e7, life in 1.0f64..59.0, rate in 0.0f64..0.2, dr in 0.001f64..0.05,
    ) {
        let base = annuitize(capex, life, rate).unwrap();
        prop_assert!(annuitize(capex, life, rate + dr).unwrap() > base);
        prop_assert!(annuitize(capex, life + 1.0, rate).unwrap() < base);
    }
}

#[test]
fn well_formed_case_has_no_violations() {
    for policy in [PolicyConfig::default(), PolicyConfig::annual(), PolicyConfig::hourly(0.9)] {
        assert_eq!(validate_case(&ladder_case(policy)), vec![]);
    }
}

#[test]
fn weights_off_by_a_tenth_give_one_violation() {
    let mut case = ladder_case(PolicyConfig::default());
    case.scenarios[0].weight = 0.9;
    let v = validate_case(&case);
    assert_eq!(v.len(), 1, "{v:?}");
    assert_eq!(v[0].field, "scenarios.weight");
    assert!(v[0].rule.contains("sum to 1"));
}

#[test]
fn double_eligibility_is_rejected() {
    let mut case = ladder_case(PolicyConfig::default());
    case.technologies.iter_mut().find(|t| t.id == "ppa_wind").unwrap().is_rps_eligible = true;
    let v = validate_case(&case);
    assert_eq!(v.len(), 1, "{v:?}");
    assert_eq!(v[0].field, "technologies[ppa_wind]");
    assert!(v[0].rule.contains("double counted"));
}

#[test]
fn policy_ranges_are_checked() {
    let mut case = ladder_case(PolicyConfig { rps_kappa: Some(1.5), ..PolicyConfig::default() });
    assert!(validate_case(&case).iter().any(|v| v.field == "policy.rps_kappa"));
    case.policy = PolicyConfig { alpha_tmr: 0.0, ..PolicyConfig::hourly(1.0) };
    assert!(validate_case(&case).iter().any(|v| v.field == "policy.alpha_tmr"));
    case.policy = PolicyConfig { tmr: TmrKind::Annual, ..PolicyConfig::hourly(1.0) };
    assert!(validate_case(&case).iter().any(|v| v.field == "policy.excess_sales_beta"));
}

#[test]
fn missing_capacity_factors_name_the_scenario_and_group() {
    let mut case = ladder_case(PolicyConfig::default());
    case.scenarios[0].cf_by_group.remove("solar");
    let v = validate_case(&case);
    assert!(v.iter().any(|v| v.field == "scenarios[base].cf.solar"), "{v:?}");
}

#[test]
fn capacity_factors_above_one_are_rejected() {
    let mut case = ladder_case(PolicyConfig::default());
    case.scenarios[0].cf_by_group.get_mut("wind").unwrap()[5] = 1.2;
    let v = validate_case(&case);
    assert!(v.iter().any(|v| v.field == "scenarios[base].cf.wind" && v.rule.contains("hour 6")), "{v:?}");
}

#[test]
fn hydrogen_demand_without_a_project_is_rejected() {
    let mut case = ladder_case(PolicyConfig::default());
    case.h2_project = None;
    assert!(validate_case(&case).iter().any(|v| v.field == "h2_project"));
    assert_eq!(validate_case(&case.without_h2()), vec![]);
}

#[test]
fn baseload_demand_draws_about_a_gigawatt() {
    let draw = defaults::h2_project().electrolyzer_draw(H2_TPH);
    assert!((draw - 999.12).abs() < 1e-9);
    assert!((H2ProjectSpec::storage_limit_hours(24.0, H2_TPH) - 441.6).abs() < 1e-9);
}

#[test]
fn case_files_resolve_inline_and_csv_series() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("cf.csv"), "hour,wind\n1,0.5\n2,0.25\n").unwrap();
    let path = dir.path().join("case.toml");
    std::fs::write(
        &path,
        r#"
label = "tiny"
demand = { grid_load = [10.0, 12.0], h2_constant = 0.0 }

[[technologies]]
id = "w"
kind = "vre"
vre_group = "wind"
existing_capacity = 30.0

[[scenarios]]
label = "a"
csv = "cf.csv"

[[scenarios]]
label = "b"
cf = { wind = [1.0, 0.0] }
"#,
    )
    .unwrap();
    let case = load_case(&path).unwrap();
    assert_eq!(case.hours(), 2);
    assert_eq!(case.scenarios.len(), 2);
    assert_eq!(case.scenarios[0].cf_by_group["wind"], vec![0.5, 0.25]);
    assert_eq!(case.scenarios[1].weight, 0.5);
    assert_eq!(case.demand.h2_demand, vec![0.0, 0.0]);
    assert_eq!(validate_case(&case), vec![]);
}

#[test]
fn malformed_case_file_reports_the_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(
        &path,
        "label = \"x\"\ntechnologies = []\ndemand = { grid_load = [1.0] }\nscenarios = []\nbogus = 3\n",
    )
    .unwrap();
    let err = load_case(&path).unwrap_err().to_string();
    assert!(err.contains("bogus"), "{err}");
}

#[test]
fn case_survives_a_json_round_trip() {
    let case = ladder_case(PolicyConfig::hourly(0.8));
    let text = serde_json::to_string(&case).unwrap();
    let back: h2match_core::domain::SystemCase = serde_json::from_str(&text).unwrap();
    assert_eq!(back, case);
}
