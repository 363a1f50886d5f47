use h2match_core::scenarios::{
    aggregate_profiles, kmeans, kmeans_reduce, read_plants, sample_oos, write_library, PlantGroup, PlantRecord,
    ScenarioError, ScenarioLibrary,
};
use proptest::prelude::*;

fn plant(id: &str, group: PlantGroup, cap: f64, years: &[(i32, Vec<f64>)]) -> PlantRecord {
    PlantRecord { plant_id: id.into(), group, capacity_mw: cap, generation: years.iter().cloned().collect() }
}

#[test]
fn three_plants_give_their_capacity_weighted_mean() {
    let a = vec![10.0, 0.0, 30.0];
    let b = vec![60.0, 20.0, 100.0];
    let c = vec![5.0, 5.0, 0.0];
    let plants = [
        plant("a", PlantGroup::NewWind, 40.0, &[(2001, a.clone())]),
        plant("b", PlantGroup::NewWind, 100.0, &[(2001, b.clone())]),
        plant("c", PlantGroup::NewWind, 10.0, &[(2001, c.clone())]),
    ];
    let (cf, clamps) = aggregate_profiles(&plants, 2001).unwrap();
    assert_eq!(clamps, 0);
    // each plant's own capacity factor weighted by its share of 150 MW
    let want: Vec<f64> =
        (0..3).map(|t| (40.0 * (a[t] / 40.0) + 100.0 * (b[t] / 100.0) + 10.0 * (c[t] / 10.0)) / 150.0).collect();
    for (got, want) in cf["new_wind"].iter().zip(&want) {
        assert!((got - want).abs() < 1e-15, "{got} vs {want}");
    }
}

#[test]
fn plant_at_full_output_gives_one() {
    let plants = [plant("s", PlantGroup::ExistingSolar, 25.0, &[(1999, vec![25.0, 25.0])])];
    assert_eq!(aggregate_profiles(&plants, 1999).unwrap().0["existing_solar"], vec![1.0, 1.0]);
}

#[test]
fn group_without_data_for_the_year_is_an_error() {
    let plants = [
        plant("w", PlantGroup::NewWind, 10.0, &[(2000, vec![1.0])]),
        plant("s", PlantGroup::NewSolar, 10.0, &[(2001, vec![1.0])]),
    ];
    let err = aggregate_profiles(&plants, 2000).unwrap_err();
    assert!(matches!(err, ScenarioError::ZeroCapacity { group: PlantGroup::NewSolar, year: 2000 }), "{err}");
}

proptest! {
    #[test]
    fn plant_order_does_not_matter(
        caps in prop::collection::vec(1.0f64..500.0, 2..8),
        fracs in prop::collection::vec(0.0f64..1.0, 16),
        rot in 0usize..8,
    ) {
        let plants: Vec<PlantRecord> = caps
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let gen = (0..4).map(|t| c * fracs[(i + t) % fracs.len()]).collect();
                let group = if i % 2 == 0 { PlantGroup::NewWind } else { PlantGroup::ExistingWind };
                plant(&format!("p{i}"), group, c, &[(2010, gen)])
            })
            .collect();
        let mut shuffled = plants.clone();
        shuffled.rotate_left(rot % plants.len());
        shuffled.reverse();
        prop_assert_eq!(aggregate_profiles(&plants, 2010).unwrap(), aggregate_profiles(&shuffled, 2010).unwrap());
    }

    #[test]
    fn lloyd_never_increases_the_sum_of_squares(
        pts in prop::collection::vec(prop::collection::vec(-10.0f64..10.0, 3), 3..30),
        k in 1usize..4,
        seed in 0u64..1000,
    ) {
        let km = kmeans(&pts, k.min(pts.len()), seed).unwrap();
        for w in km.sse_history.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-9 * w[0].abs().max(1.0), "{:?}", km.sse_history);
        }
    }
}

fn library(levels: &[(i32, f64)]) -> ScenarioLibrary {
    let plants: Vec<PlantRecord> = levels
        .iter()
        .map(|&(y, l)| {
            let gen = (0..24).map(|t| 100.0 * l * (0.5 + 0.4 * (t as f64 / 4.0).sin()).clamp(0.0, 1.0)).collect();
            plant(&format!("w{y}"), PlantGroup::NewWind, 100.0, &[(y, gen)])
        })
        .collect();
    ScenarioLibrary::from_plants(&plants).unwrap()
}

#[test]
fn reduction_is_deterministic_for_a_seed() {
    let lib = library(&[(1, 0.4), (2, 0.45), (3, 0.5), (4, 0.9), (5, 0.95), (6, 1.0), (7, 0.7)]);
    let first = kmeans_reduce(&lib, 3, 42, "new_wind").unwrap();
    assert_eq!(first.len(), 3);
    for _ in 0..5 {
        assert_eq!(kmeans_reduce(&lib, 3, 42, "new_wind").unwrap(), first);
    }
    assert_eq!(kmeans_reduce(&lib, 7, 1, "new_wind").unwrap(), (1..=7).collect::<Vec<_>>());
}

#[test]
fn reduction_needs_the_feature_group() {
    let lib = library(&[(1, 0.4), (2, 0.5)]);
    assert!(matches!(kmeans_reduce(&lib, 1, 0, "new_solar"), Err(ScenarioError::MissingFeature { .. })));
    assert!(matches!(kmeans_reduce(&ScenarioLibrary::default(), 1, 0, "new_wind"), Err(ScenarioError::EmptyLibrary)));
}

#[test]
fn out_of_sample_years_come_from_the_complement() {
    let mut lib = library(&[(1, 0.4), (2, 0.5), (3, 0.6), (4, 0.7), (5, 0.8)]);
    lib.design_years = vec![2, 4];
    assert_eq!(sample_oos(&lib, 3, 9).unwrap(), vec![1, 3, 5]);
    let some = sample_oos(&lib, 2, 9).unwrap();
    assert_eq!(some, sample_oos(&lib, 2, 9).unwrap());
    assert!(some.iter().all(|y| !lib.design_years.contains(y)));
    assert!(matches!(sample_oos(&lib, 4, 9), Err(ScenarioError::TooManyOos { n: 4, available: 3 })));

    let mut pair = library(&[(10, 0.4), (11, 0.5)]);
    pair.design_years = vec![10];
    assert_eq!(sample_oos(&pair, 1, 0).unwrap(), vec![11]);
}

#[test]
fn library_scenarios_get_uniform_weights() {
    let lib = library(&[(1, 0.4), (2, 0.5), (3, 0.6), (4, 0.7)]);
    let s = lib.scenarios(&[1, 3, 4]).unwrap();
    assert_eq!(s.iter().map(|s| s.year_label.as_str()).collect::<Vec<_>>(), ["1", "3", "4"]);
    assert!(s.iter().all(|s| (s.weight - 1.0 / 3.0).abs() < 1e-15));
    assert!(matches!(lib.scenarios(&[9]), Err(ScenarioError::UnknownYear(9))));
}

#[test]
fn plant_files_aggregate_and_write_a_library() {
    let dir = tempfile::tempdir().unwrap();
    let registry = dir.path().join("plants.csv");
    let generation = dir.path().join("gen.csv");
    std::fs::write(&registry, "plant_id,group,capacity_mw\na,new-wind,10\nb,new_wind,30\n").unwrap();
    let mut gen = String::from("year,hour,plant_id,mwh\n");
    for h in 1..=3 {
        gen += &format!("2001,{h},a,{}\n2001,{h},b,{}\n", h as f64, 3.0 * h as f64);
    }
    std::fs::write(&generation, gen).unwrap();
    let plants = read_plants(&registry, &generation).unwrap();
    assert_eq!(plants.len(), 2);
    let mut lib = ScenarioLibrary::from_plants(&plants).unwrap();
    assert_eq!(lib.years[&2001].cf_by_group["new_wind"], vec![0.1, 0.2, 0.3]);
    lib.design_years = vec![2001];

    let out = dir.path().join("lib");
    let written = write_library(&out, &lib).unwrap();
    assert_eq!(written.len(), 2);
    let csv = std::fs::read_to_string(out.join("cf_2001.csv")).unwrap();
    assert!(csv.starts_with("hour,new_wind"), "{csv}");
    let sel: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("selection.json")).unwrap()).unwrap();
    assert_eq!(sel["design_years"], serde_json::json!([2001]));
}

#[test]
fn gaps_and_unknown_plants_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let registry = dir.path().join("plants.csv");
    std::fs::write(&registry, "plant_id,group,capacity_mw\na,new_wind,10\n").unwrap();
    let generation = dir.path().join("gen.csv");
    std::fs::write(&generation, "year,hour,plant_id,mwh\n2001,1,a,1\n2001,3,a,1\n").unwrap();
    let err = read_plants(&registry, &generation).unwrap_err().to_string();
    assert!(err.contains("without gaps"), "{err}");
    std::fs::write(&generation, "year,hour,plant_id,mwh\n2001,1,zz,1\n").unwrap();
    let err = read_plants(&registry, &generation).unwrap_err().to_string();
    assert!(err.contains("zz"), "{err}");
}

#[test]
fn leap_year_loses_february_29() {
    let dir = tempfile::tempdir().unwrap();
    let registry = dir.path().join("plants.csv");
    std::fs::write(&registry, "plant_id,group,capacity_mw\na,existing_solar,1\n").unwrap();
    let mut gen = String::from("year,hour,plant_id,mwh\n");
    for h in 1..=8784 {
        gen += &format!("2000,{h},a,0.5\n");
    }
    let generation = dir.path().join("gen.csv");
    std::fs::write(&generation, gen).unwrap();
    let plants = read_plants(&registry, &generation).unwrap();
    assert_eq!(plants[0].generation[&2000].len(), 8760);
}
