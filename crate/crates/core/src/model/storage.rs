use crate::domain::TechKind;
use crate::lp::{Constraint, Sense};

use super::{row, Ctx, ModelError};

/// Availability limits for VRE, hydro and firm technologies, and battery
/// inventory, power and duration limits.
///
/// `avail_<g>[s,t]`: gen ≤ cf·max_availability·installed; its slack is the
/// curtailed energy. Hydro and firm units with a minimum output get
/// `gen_min_<g>[s,t]` at `min(min_stable, available)` of installed. Battery
/// state of charge evolves as `soc_t = (1 - sd)·soc_{t-1} + η_c·charge -
/// discharge/η_d`, cyclic within each scenario.
pub fn build_vre_and_storage(ctx: &Ctx) -> Result<Vec<Constraint>, ModelError> {
    let case = ctx.case;
    let v = ctx.vars;
    let mut rows = Vec::new();
    for (spec, tv) in case.technologies.iter().zip(&v.techs) {
        let id = &spec.id;
        let (cap_terms, existing) = tv.power(spec);
        match spec.kind {
            TechKind::Thermal => {}
            TechKind::Vre | TechKind::Hydro | TechKind::NuclearLike => {
                if spec.uses_cf() {
                    let group = spec.vre_group.as_deref().unwrap_or_default();
                    for sc in &case.scenarios {
                        let series = sc.cf_by_group.get(group).ok_or_else(|| {
                            ModelError::builder(
                                "vre_and_storage",
                                format!("scenario `{}` has no capacity factors for `{group}`", sc.year_label),
                            )
                        })?;
                        if series.len() != v.hours || series.iter().any(|x| !(0.0..=1.0).contains(x)) {
                            return Err(ModelError::builder(
                                "vre_and_storage",
                                format!(
                                    "scenario `{}` group `{group}`: series must hold {} values in [0, 1]",
                                    sc.year_label, v.hours
                                ),
                            ));
                        }
                    }
                }
                for s in 0..v.scenarios {
                    for t in 0..v.hours {
                        let gen = tv.gen.at(s, t);
                        let a = case.cf(spec, s, t) * spec.max_availability;
                        let mut terms = vec![(gen, 1.0)];
                        terms.extend(cap_terms.iter().map(|&(x, c)| (x, -a * c)));
                        rows.push(row(format!("avail_{id}[{s},{t}]"), terms, Sense::Le, a * existing));
                        if spec.min_stable_fraction > 0.0 {
                            let m = spec.min_stable_fraction.min(a);
                            let mut terms = vec![(gen, 1.0)];
                            terms.extend(cap_terms.iter().map(|&(x, c)| (x, -m * c)));
                            rows.push(row(format!("gen_min_{id}[{s},{t}]"), terms, Sense::Ge, m * existing));
                        }
                    }
                }
            }
            TechKind::Battery => {
                let st = tv
                    .storage
                    .as_ref()
                    .ok_or_else(|| ModelError::builder("vre_and_storage", format!("{id}: no storage variables")))?;
                let (e_terms, e_existing) = tv.energy(spec);
                let keep = 1.0 - spec.self_discharge;
                let (eta_c, eta_d) = (spec.charge_efficiency, spec.discharge_efficiency);
                for s in 0..v.scenarios {
                    for t in 0..v.hours {
                        let (soc, ch, dis) = (st.energy.at(s, t), st.charge.at(s, t), tv.gen.at(s, t));
                        rows.push(row(
                            format!("soc_{id}[{s},{t}]"),
                            vec![(soc, 1.0), (st.energy.prev(s, t), -keep), (ch, -eta_c), (dis, 1.0 / eta_d)],
                            Sense::Eq,
                            0.0,
                        ));
                        let mut terms = vec![(soc, 1.0)];
                        terms.extend(e_terms.iter().map(|&(x, c)| (x, -c)));
                        rows.push(row(format!("soc_max_{id}[{s},{t}]"), terms, Sense::Le, e_existing));
                        let mut terms = vec![(ch, 1.0)];
                        terms.extend(cap_terms.iter().map(|&(x, c)| (x, -c)));
                        rows.push(row(format!("charge_max_{id}[{s},{t}]"), terms, Sense::Le, existing));
                        let mut terms = vec![(dis, 1.0)];
                        terms.extend(cap_terms.iter().map(|&(x, c)| (x, -c)));
                        rows.push(row(format!("discharge_max_{id}[{s},{t}]"), terms, Sense::Le, existing));
                    }
                }
                // energy - d·power compared against d·existing_power - existing_energy
                for (name, d, sense) in
                    [("dur_min", spec.duration_min, Sense::Ge), ("dur_max", spec.duration_max, Sense::Le)]
                {
                    let mut terms: Vec<_> = e_terms.clone();
                    terms.extend(cap_terms.iter().map(|&(x, c)| (x, -d * c)));
                    rows.push(row(format!("{name}_{id}"), terms, sense, d * existing - e_existing));
                }
            }
        }
    }
    Ok(rows)
}
