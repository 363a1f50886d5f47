use crate::domain::{TechKind, TmrKind};
use crate::lp::{Constraint, Sense, VarId};

use super::{row, Ctx, ModelError};

/// Capacity reserve margin, `crm[s,t]`.
///
/// Derated installed capacity of thermal and firm units, derated available
/// VRE and hydro capacity, and derated storage net discharge, minus derated
/// electrolyzer consumption, must cover `(1 + α)·load`. Contracted (PPA)
/// resources contribute nothing. Dispatch mode adds `crm_slack` priced at
/// the value of lost load.
pub fn build_crm(ctx: &Ctx) -> Result<Vec<Constraint>, ModelError> {
    let case = ctx.case;
    let v = ctx.vars;
    let Some(alpha) = case.policy.crm_alpha else {
        return Ok(Vec::new());
    };
    let mut rows = Vec::with_capacity(v.scenarios * v.hours);
    for s in 0..v.scenarios {
        for t in 0..v.hours {
            let mut terms: Vec<(VarId, f64)> = Vec::new();
            let mut constant = 0.0;
            for (spec, tv) in case.technologies.iter().zip(&v.techs) {
                let eta = spec.crm_derate;
                if spec.is_ppa_eligible || eta == 0.0 {
                    continue;
                }
                match spec.kind {
                    TechKind::Battery => {
                        terms.push((tv.gen.at(s, t), eta));
                        if let Some(st) = &tv.storage {
                            terms.push((st.charge.at(s, t), -eta));
                        }
                    }
                    kind => {
                        let f = if kind == TechKind::Thermal || kind == TechKind::NuclearLike {
                            eta
                        } else {
                            eta * case.cf(spec, s, t) * spec.max_availability
                        };
                        let (cap, existing) = tv.power(spec);
                        terms.extend(cap.iter().map(|&(x, c)| (x, f * c)));
                        constant += f * existing;
                    }
                }
            }
            if let (Some(h), Some(spec)) = (&v.h2, &case.h2_project) {
                terms.push((h.gen.at(s, t), -spec.electrolyzer_crm_derate * spec.electrolyzer_power_per_tonne));
            }
            if let Some(slack) = &v.crm_slack {
                terms.push((slack.at(s, t), 1.0));
            }
            let rhs = (1.0 + alpha) * case.demand.grid_load[t] - constant;
            rows.push(row(format!("crm[{s},{t}]"), terms, Sense::Ge, rhs));
        }
    }
    Ok(rows)
}

/// Renewable portfolio standard, one `rps[s]` row per scenario.
///
/// Annual generation of RPS-eligible, non-contracted resources plus
/// `rps_slack` must reach κ of grid load, or of grid load plus electrolyzer
/// and compressor consumption when the standard covers hydrogen.
pub fn build_rps(ctx: &Ctx) -> Result<Vec<Constraint>, ModelError> {
    let case = ctx.case;
    let v = ctx.vars;
    let Some(kappa) = case.policy.rps_kappa else {
        return Ok(Vec::new());
    };
    let slack = v.rps_slack.as_ref().ok_or_else(|| ModelError::builder("rps", "no slack variables"))?;
    let eligible: Vec<usize> = case
        .technologies
        .iter()
        .enumerate()
        .filter(|(_, t)| t.is_rps_eligible && !t.is_ppa_eligible && !t.is_storage())
        .map(|(i, _)| i)
        .collect();
    if kappa > 0.0 && eligible.is_empty() && case.policy.penalties.rps_slack <= 0.0 {
        return Err(ModelError::builder("rps", "no eligible resources and a zero slack penalty"));
    }
    let total_load: f64 = case.demand.grid_load.iter().sum();
    let mut rows = Vec::with_capacity(v.scenarios);
    for s in 0..v.scenarios {
        let mut terms: Vec<(VarId, f64)> = Vec::new();
        for &k in &eligible {
            terms.extend(v.techs[k].gen.scenario(s).iter().map(|&x| (x, 1.0)));
        }
        if case.policy.rps_covers_h2 {
            if let (Some(h), Some(spec)) = (&v.h2, &case.h2_project) {
                for t in 0..v.hours {
                    terms.push((h.gen.at(s, t), -kappa * spec.electrolyzer_power_per_tonne));
                    terms.push((h.charge.at(s, t), -kappa * spec.compressor_power_per_tonne));
                }
            }
        }
        terms.push((slack[s], 1.0));
        rows.push(row(format!("rps[{s}]"), terms, Sense::Ge, kappa * total_load));
    }
    Ok(rows)
}

/// Time-matching requirement.
///
/// Hourly: `tmr_hourly[s,t]` requires contracted generation plus contracted
/// storage net discharge (plus `tmr_slack` in dispatch mode) to cover α of
/// electrolyzer consumption, and `excess_cap[s]` limits annual contracted
/// output to `(1 + β)` times annual consumption when β is set. Annual:
/// `tmr_annual[s]` equates annual contracted output with annual consumption.
pub fn build_tmr(ctx: &Ctx) -> Result<Vec<Constraint>, ModelError> {
    let case = ctx.case;
    let v = ctx.vars;
    let pol = &case.policy;
    if pol.tmr == TmrKind::None {
        return Ok(Vec::new());
    }
    let (Some(h), Some(spec)) = (&v.h2, &case.h2_project) else {
        return Err(ModelError::builder("tmr", "time matching requested without a hydrogen project"));
    };
    if !case.technologies.iter().any(|t| t.is_ppa_eligible) {
        return Err(ModelError::builder("tmr", "time matching requested without PPA-eligible resources"));
    }
    let lambda = spec.electrolyzer_power_per_tonne;
    let comp = if pol.tmr_includes_compressor { spec.compressor_power_per_tonne } else { 0.0 };
    // contracted supply and matched load of one hour, load with coefficient `scale`
    let hour_terms = |s: usize, t: usize, scale: f64| {
        let mut terms: Vec<(VarId, f64)> = Vec::new();
        for (tspec, tv) in case.technologies.iter().zip(&v.techs) {
            if !tspec.is_ppa_eligible {
                continue;
            }
            terms.push((tv.gen.at(s, t), 1.0));
            if let Some(st) = &tv.storage {
                terms.push((st.charge.at(s, t), -1.0));
            }
        }
        terms.push((h.gen.at(s, t), -scale * lambda));
        terms.push((h.charge.at(s, t), -scale * comp));
        terms
    };
    let mut rows = Vec::new();
    match pol.tmr {
        TmrKind::Hourly => {
            for s in 0..v.scenarios {
                for t in 0..v.hours {
                    let mut terms = hour_terms(s, t, pol.alpha_tmr);
                    if let Some(slack) = &v.tmr_slack {
                        terms.push((slack.at(s, t), 1.0));
                    }
                    rows.push(row(format!("tmr_hourly[{s},{t}]"), terms, Sense::Ge, 0.0));
                }
            }
            if let Some(beta) = pol.excess_sales_beta {
                for s in 0..v.scenarios {
                    let terms = (0..v.hours).flat_map(|t| hour_terms(s, t, 1.0 + beta)).collect();
                    rows.push(row(format!("excess_cap[{s}]"), terms, Sense::Le, 0.0));
                }
            }
        }
        TmrKind::Annual => {
            for s in 0..v.scenarios {
                let terms = (0..v.hours).flat_map(|t| hour_terms(s, t, 1.0)).collect();
                rows.push(row(format!("tmr_annual[{s}]"), terms, Sense::Eq, 0.0));
            }
        }
        TmrKind::None => {}
    }
    Ok(rows)
}
