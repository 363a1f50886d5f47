use crate::lp::{Constraint, Sense};

use super::{row, Ctx, ModelError};

/// Hourly electricity and hydrogen balances.
///
/// `power_balance[s,t]`: Σ gen + Σ (discharge - charge) + nse = load +
/// λ·h2_gen + compressor·h2_charge. `h2_balance[s,t]`: h2_gen + h2_discharge
/// - h2_charge + nse_h2 = h2 demand.
pub fn build_balances(ctx: &Ctx) -> Result<Vec<Constraint>, ModelError> {
    let case = ctx.case;
    let v = ctx.vars;
    let load = &case.demand.grid_load;
    if load.len() != v.hours {
        return Err(ModelError::builder("balances", "missing grid load series"));
    }
    let mut rows = Vec::with_capacity(v.scenarios * v.hours * 2);
    for s in 0..v.scenarios {
        for t in 0..v.hours {
            let mut terms = Vec::with_capacity(v.techs.len() + 3);
            for tv in &v.techs {
                terms.push((tv.gen.at(s, t), 1.0));
                if let Some(st) = &tv.storage {
                    terms.push((st.charge.at(s, t), -1.0));
                }
            }
            terms.push((v.nse_power.at(s, t), 1.0));
            if let (Some(h), Some(spec)) = (&v.h2, &case.h2_project) {
                terms.push((h.gen.at(s, t), -spec.electrolyzer_power_per_tonne));
                terms.push((h.charge.at(s, t), -spec.compressor_power_per_tonne));
            }
            rows.push(row(format!("power_balance[{s},{t}]"), terms, Sense::Eq, load[t]));
        }
    }
    if let Some(h) = &v.h2 {
        let demand = &case.demand.h2_demand;
        if demand.len() != v.hours {
            return Err(ModelError::builder("balances", "missing hydrogen demand series"));
        }
        for s in 0..v.scenarios {
            for t in 0..v.hours {
                let terms = vec![
                    (h.gen.at(s, t), 1.0),
                    (h.discharge.at(s, t), 1.0),
                    (h.charge.at(s, t), -1.0),
                    (h.nse.at(s, t), 1.0),
                ];
                rows.push(row(format!("h2_balance[{s},{t}]"), terms, Sense::Eq, demand[t]));
            }
        }
    }
    Ok(rows)
}
