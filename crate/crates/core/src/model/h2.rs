use crate::domain::TmrKind;
use crate::lp::{Constraint, Sense};

use super::{row, Ctx, ModelError};

/// Electrolyzer, compressor and tank rows.
///
/// Electrolyzer capacity is MW electric: `λ·h2_gen ≤ availability·cap`.
/// Minimum-output and ramp rows are only emitted when they can bind
/// (fraction > 0, ramp < 1). The tank level is cyclic and bounded by the
/// built tonnes; charging is limited by the compressor throughput.
pub fn build_h2_assets(ctx: &Ctx) -> Result<Vec<Constraint>, ModelError> {
    let case = ctx.case;
    let (Some(spec), Some(h)) = (&case.h2_project, &ctx.vars.h2) else {
        if case.policy.tmr != TmrKind::None {
            return Err(ModelError::builder("h2_assets", "time matching requested without a hydrogen project"));
        }
        return Ok(Vec::new());
    };
    let lambda = spec.electrolyzer_power_per_tonne;
    let avail = spec.electrolyzer_availability;
    let min = spec.electrolyzer_min_output_fraction;
    let ramp = spec.electrolyzer_ramp;
    let cap = h.electrolyzer;
    let mut rows = Vec::new();
    for s in 0..ctx.vars.scenarios {
        for t in 0..ctx.vars.hours {
            let gen = h.gen.at(s, t);
            rows.push(row(format!("ely_max[{s},{t}]"), vec![(gen, lambda), (cap, -avail)], Sense::Le, 0.0));
            if min > 0.0 {
                rows.push(row(format!("ely_min[{s},{t}]"), vec![(gen, lambda), (cap, -min)], Sense::Ge, 0.0));
            }
            if ramp < 1.0 {
                let prev = h.gen.prev(s, t);
                rows.push(row(
                    format!("ely_ramp_up[{s},{t}]"),
                    vec![(gen, lambda), (prev, -lambda), (cap, -ramp)],
                    Sense::Le,
                    0.0,
                ));
                rows.push(row(
                    format!("ely_ramp_dn[{s},{t}]"),
                    vec![(prev, lambda), (gen, -lambda), (cap, -ramp)],
                    Sense::Le,
                    0.0,
                ));
            }
            let level = h.level.at(s, t);
            rows.push(row(
                format!("h2_soc[{s},{t}]"),
                vec![(level, 1.0), (h.level.prev(s, t), -1.0), (h.charge.at(s, t), -1.0), (h.discharge.at(s, t), 1.0)],
                Sense::Eq,
                0.0,
            ));
            rows.push(row(format!("h2_level_max[{s},{t}]"), vec![(level, 1.0), (h.storage, -1.0)], Sense::Le, 0.0));
            rows.push(row(
                format!("h2_charge_max[{s},{t}]"),
                vec![(h.charge.at(s, t), 1.0), (h.compressor, -1.0)],
                Sense::Le,
                0.0,
            ));
        }
    }
    Ok(rows)
}
