use crate::domain::TechKind;
use crate::lp::{Constraint, Sense};

use super::{row, Ctx, ModelError};

/// Linearized unit commitment for thermal technologies.
///
/// Commitment `on` is capped by available capacity, generation lies in
/// `[min_stable·on, on]`, `on_t - on_{t-1} = start_t - shut_t` (cyclic), and
/// ramps are limited by the ramp fraction of units that stay online, with
/// started (shut) units allowed to move by `max(min_stable, ramp)`. Rows are
/// emitted even when a limit is loose.
pub fn build_thermal(ctx: &Ctx) -> Result<Vec<Constraint>, ModelError> {
    let v = ctx.vars;
    let mut rows = Vec::new();
    for (spec, tv) in ctx.case.technologies.iter().zip(&v.techs) {
        if spec.kind != TechKind::Thermal {
            continue;
        }
        let id = &spec.id;
        let msf = spec.min_stable_fraction;
        if !(0.0..=1.0).contains(&msf) {
            return Err(ModelError::builder("thermal", format!("{id}: min_stable_fraction {msf} exceeds 1")));
        }
        let c = tv
            .commit
            .as_ref()
            .ok_or_else(|| ModelError::builder("thermal", format!("{id}: no commitment variables")))?;
        let (cap_terms, existing) = tv.power(spec);
        let avail = spec.max_availability;
        let (ru, rd) = (spec.ramp_up, spec.ramp_down);
        for s in 0..v.scenarios {
            for t in 0..v.hours {
                let (on, start, shut, gen) = (c.on.at(s, t), c.start.at(s, t), c.shut.at(s, t), tv.gen.at(s, t));
                let mut terms = vec![(on, 1.0)];
                terms.extend(cap_terms.iter().map(|&(x, a)| (x, -avail * a)));
                rows.push(row(format!("commit_cap_{id}[{s},{t}]"), terms, Sense::Le, avail * existing));
                rows.push(row(format!("gen_max_{id}[{s},{t}]"), vec![(gen, 1.0), (on, -1.0)], Sense::Le, 0.0));
                rows.push(row(format!("gen_min_{id}[{s},{t}]"), vec![(gen, 1.0), (on, -msf)], Sense::Ge, 0.0));
                rows.push(row(
                    format!("commit_{id}[{s},{t}]"),
                    vec![(on, 1.0), (c.on.prev(s, t), -1.0), (start, -1.0), (shut, 1.0)],
                    Sense::Eq,
                    0.0,
                ));
                let gen_prev = tv.gen.prev(s, t);
                rows.push(row(
                    format!("ramp_up_{id}[{s},{t}]"),
                    vec![(gen, 1.0), (gen_prev, -1.0), (on, -ru), (start, ru - msf.max(ru))],
                    Sense::Le,
                    0.0,
                ));
                rows.push(row(
                    format!("ramp_dn_{id}[{s},{t}]"),
                    vec![(gen_prev, 1.0), (gen, -1.0), (on, -rd), (start, rd), (shut, -msf.max(rd))],
                    Sense::Le,
                    0.0,
                ));
            }
        }
    }
    Ok(rows)
}
