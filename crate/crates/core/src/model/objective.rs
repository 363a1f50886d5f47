use crate::domain::TechKind;
use crate::lp::VarId;

use super::{Ctx, Mode, ModelError};

/// Objective coefficients; a column may appear more than once and its
/// entries add up.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Objective {
    pub costs: Vec<(VarId, f64)>,
    /// Fixed O&M of existing capacity, which no decision can avoid except
    /// through retirement.
    pub offset: f64,
}

/// Annualized investment and fixed O&M of first-stage capacity plus the
/// expected (σ-weighted, annualized) operating cost of every scenario.
pub fn build_objective(ctx: &Ctx) -> Result<Objective, ModelError> {
    let case = ctx.case;
    let v = ctx.vars;
    if ctx.mode == &Mode::Stochastic {
        let total: f64 = case.scenarios.iter().map(|s| s.weight).sum();
        if (total - 1.0).abs() > 1e-6 {
            return Err(ModelError::builder("objective", format!("scenario weights sum to {total}, not 1")));
        }
    }
    let pen = &case.policy.penalties;
    let mut obj = Objective::default();
    let mut push = |v: VarId, c: f64| {
        if c != 0.0 {
            obj.costs.push((v, c));
        }
    };

    let mut offset = 0.0;
    for (spec, tv) in case.technologies.iter().zip(&v.techs) {
        if let Some(x) = tv.cap_new {
            push(x, spec.inv_cost_power_annualized + spec.fom_power);
        }
        if let Some(x) = tv.retired {
            push(x, -spec.fom_power);
        }
        if let Some(x) = tv.energy_new {
            push(x, spec.inv_cost_energy_annualized + spec.fom_energy);
        }
        if let Some(x) = tv.energy_retired {
            push(x, -spec.fom_energy);
        }
        offset += spec.fom_power * spec.existing_capacity;
        if spec.is_storage() {
            offset += spec.fom_energy * spec.existing_energy_capacity;
        }
        let marginal = spec.vom + spec.heat_rate * case.fuel_price(spec);
        let start = spec.start_cost_per_mw(case.fuel_price(spec));
        for s in 0..v.scenarios {
            let w = ctx.op_weight(s);
            for t in 0..v.hours {
                push(tv.gen.at(s, t), w * marginal);
                if let (TechKind::Thermal, Some(c)) = (spec.kind, &tv.commit) {
                    push(c.start.at(s, t), w * start);
                }
            }
        }
    }

    if let (Some(h), Some(spec)) = (&v.h2, &case.h2_project) {
        push(h.electrolyzer, spec.electrolyzer_fixed_cost_per_mw_elec());
        push(h.storage, spec.h2_store_inv_energy_annualized);
        push(h.compressor, spec.compressor_cost_per_tph());
        for s in 0..v.scenarios {
            let w = ctx.op_weight(s);
            for t in 0..v.hours {
                push(h.gen.at(s, t), w * spec.electrolyzer_vom);
                push(h.nse.at(s, t), w * pen.unserved_h2);
            }
        }
    }

    for s in 0..v.scenarios {
        let w = ctx.op_weight(s);
        for t in 0..v.hours {
            push(v.nse_power.at(s, t), w * pen.voll);
            if let Some(g) = &v.tmr_slack {
                push(g.at(s, t), w * pen.tmr_slack);
            }
            if let Some(g) = &v.crm_slack {
                push(g.at(s, t), w * pen.voll);
            }
        }
        if let Some(r) = &v.rps_slack {
            push(r[s], w * pen.rps_slack);
        }
    }
    obj.offset = offset;
    Ok(obj)
}
