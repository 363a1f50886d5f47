use super::{AnalysisError, CaseReport, Solved};

/// Annual CO2 from fuel burned for generation and for starts, tCO2/yr,
/// expected over scenarios.
pub fn emissions_total(v: &Solved) -> f64 {
    let mut total = 0.0;
    for (spec, tv) in v.case.technologies.iter().zip(&v.model.vars.techs) {
        let Some(fuel) = spec.fuel_id.as_deref().and_then(|f| v.case.fuel(f)) else {
            continue;
        };
        total += spec.heat_rate * fuel.co2_factor * v.annual(&tv.gen);
        if let Some(c) = &tv.commit {
            total += spec.start_fuel / spec.unit_size * fuel.co2_factor * v.annual(&c.start);
        }
    }
    total
}

/// Emissions caused per tonne of hydrogen: `(e_with - e_without) / tonnes`.
pub fn emissions_delta_per_tonne(e_with: f64, e_without: f64, h2_tonnes: f64) -> Result<f64, AnalysisError> {
    if !(h2_tonnes > 0.0) {
        return Err(AnalysisError::InvalidInput(format!("hydrogen production must be > 0 (got {h2_tonnes})")));
    }
    Ok((e_with - e_without) / h2_tonnes)
}

/// System emissions with hydrogen demand minus the same system without it,
/// per tonne of hydrogen produced, tCO2/tH2. May be negative.
pub fn consequential_emissions(
    with_h2: &CaseReport,
    baseline: &CaseReport,
    h2_tonnes: f64,
) -> Result<f64, AnalysisError> {
    emissions_delta_per_tonne(with_h2.emissions_t, baseline.emissions_t, h2_tonnes)
}
