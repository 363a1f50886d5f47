use serde::{Deserialize, Serialize};

use crate::domain::{TechKind, TechnologySpec};
use crate::model::TechVars;

use super::{AnalysisError, Prices, Solved};

/// Cost of energy attribute certificates per kg of hydrogen:
/// `share · consumption · price / 1000`.
///
/// `consumption` is MWh per tonne, `share` the fraction of consumption that
/// needs certificates and `price` $/MWh.
pub fn eac_cost(consumption: f64, share: f64, price: f64) -> f64 {
    share * consumption * price / 1000.0
}

/// Annual cost of one technology split into investment, fixed O&M and
/// variable (VOM, fuel, starts), all $/yr.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ResourceCost {
    pub investment: f64,
    pub fixed_om: f64,
    pub variable: f64,
}

impl ResourceCost {
    pub fn total(&self) -> f64 {
        self.investment + self.fixed_om + self.variable
    }
}

pub fn resource_cost(v: &Solved, spec: &TechnologySpec, tv: &TechVars) -> ResourceCost {
    let val = |x: Option<crate::lp::VarId>| x.map_or(0.0, |x| v.x(x));
    let power = spec.existing_capacity + val(tv.cap_new) - val(tv.retired);
    let energy = if spec.is_storage() {
        spec.existing_energy_capacity + val(tv.energy_new) - val(tv.energy_retired)
    } else {
        0.0
    };
    let price = v.case.fuel_price(spec);
    let mut variable = (spec.vom + spec.heat_rate * price) * v.annual(&tv.gen);
    if let Some(c) = &tv.commit {
        variable += spec.start_cost_per_mw(price) * v.annual(&c.start);
    }
    ResourceCost {
        investment: spec.inv_cost_power_annualized * val(tv.cap_new)
            + spec.inv_cost_energy_annualized * val(tv.energy_new),
        fixed_om: spec.fom_power * power + spec.fom_energy * energy,
        variable,
    }
}

/// Break-even hydrogen price and its components, annual $ unless noted.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LcohBreakdown {
    pub electrolyzer: f64,
    pub h2_storage: f64,
    pub compressor: f64,
    /// Grid energy bought for electrolysis and compression at the energy price.
    pub energy_purchases: f64,
    /// Capacity-reserve cost of electrolyzer consumption.
    pub capacity_purchases: f64,
    pub ppa_fixed: f64,
    pub ppa_variable: f64,
    /// Revenue from selling contracted output into the grid (subtracted).
    pub ppa_sales: f64,
    /// Annual hydrogen produced, tonnes.
    pub h2_tonnes: f64,
    /// $/kg.
    pub lcoh: f64,
}

impl LcohBreakdown {
    pub fn net_cost(&self) -> f64 {
        self.electrolyzer
            + self.h2_storage
            + self.compressor
            + self.energy_purchases
            + self.capacity_purchases
            + self.ppa_fixed
            + self.ppa_variable
            - self.ppa_sales
    }
}

/// Project cost net of contracted-output sales per kg of hydrogen produced.
/// Expected (σ-weighted) numerator and denominator in stochastic runs.
pub fn lcoh(v: &Solved, prices: &Prices) -> Result<LcohBreakdown, AnalysisError> {
    let (Some(spec), Some(h)) = (&v.case.h2_project, &v.model.vars.h2) else {
        return Err(AnalysisError::InvalidInput("case has no hydrogen project".into()));
    };
    let mut b = LcohBreakdown {
        electrolyzer: spec.electrolyzer_fixed_cost_per_mw_elec() * v.x(h.electrolyzer)
            + spec.electrolyzer_vom * v.annual(&h.gen),
        h2_storage: spec.h2_store_inv_energy_annualized * v.x(h.storage),
        compressor: spec.compressor_cost_per_tph() * v.x(h.compressor),
        h2_tonnes: v.annual(&h.gen),
        ..Default::default()
    };
    let lambda = spec.electrolyzer_power_per_tonne;
    let vars = &v.model.vars;
    for s in 0..vars.scenarios {
        for t in 0..vars.hours {
            let (g, ch) = (v.x(h.gen.at(s, t)), v.x(h.charge.at(s, t)));
            b.energy_purchases += prices.energy[s][t] * (lambda * g + spec.compressor_power_per_tonne * ch);
            if let Some(c) = &prices.capacity {
                b.capacity_purchases += c[s][t] * spec.electrolyzer_crm_derate * lambda * g;
            }
        }
    }
    for (tspec, tv) in v.case.technologies.iter().zip(&vars.techs) {
        if !tspec.is_ppa_eligible {
            continue;
        }
        let cost = resource_cost(v, tspec, tv);
        b.ppa_fixed += cost.investment + cost.fixed_om;
        b.ppa_variable += cost.variable;
        b.ppa_sales += energy_revenue(v, prices, tv);
    }
    if b.h2_tonnes <= 0.0 {
        return Err(AnalysisError::NoProduction);
    }
    b.lcoh = b.net_cost() / (b.h2_tonnes * 1000.0);
    Ok(b)
}

fn net_output(v: &Solved, tv: &TechVars, s: usize, t: usize) -> f64 {
    v.x(tv.gen.at(s, t)) - tv.storage.as_ref().map_or(0.0, |st| v.x(st.charge.at(s, t)))
}

fn energy_revenue(v: &Solved, prices: &Prices, tv: &TechVars) -> f64 {
    let mut acc = 0.0;
    for s in 0..v.model.vars.scenarios {
        for t in 0..v.model.vars.hours {
            acc += prices.energy[s][t] * net_output(v, tv, s, t);
        }
    }
    acc
}

/// Revenue by source and cost of one resource, $/MW/yr of installed power.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RevenueStack {
    pub id: String,
    pub installed_mw: f64,
    pub is_ppa: bool,
    pub electricity_sales: f64,
    pub capacity_reserve: f64,
    pub rps: f64,
    pub tmr: f64,
    /// Charge from the excess-sales cap (≤ 0); not part of `total_revenue`.
    pub excess_cap_charge: f64,
    pub total_revenue: f64,
    pub total_cost: f64,
}

impl RevenueStack {
    /// Revenue above cost; for contracted resources this is the rent the
    /// excess-sales cap creates.
    pub fn net(&self) -> f64 {
        self.total_revenue - self.total_cost
    }
}

/// Per-resource revenue stacks priced at the row duals. Resources with no
/// installed capacity are omitted.
pub fn revenue_stack(v: &Solved, prices: &Prices) -> Result<Vec<RevenueStack>, AnalysisError> {
    let vars = &v.model.vars;
    let mut out = Vec::new();
    for (spec, tv) in v.case.technologies.iter().zip(&vars.techs) {
        let val = |x: Option<crate::lp::VarId>| x.map_or(0.0, |x| v.x(x));
        let installed = spec.existing_capacity + val(tv.cap_new) - val(tv.retired);
        if installed <= 1e-6 {
            continue;
        }
        let ppa = spec.is_ppa_eligible;
        let (mut energy, mut capacity, mut rps, mut tmr, mut excess) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for s in 0..vars.scenarios {
            let mut annual_net = 0.0;
            let mut annual_gen = 0.0;
            for t in 0..vars.hours {
                let net = net_output(v, tv, s, t);
                annual_net += net;
                annual_gen += v.x(tv.gen.at(s, t));
                energy += prices.energy[s][t] * net;
                if let (false, Some(c)) = (ppa, &prices.capacity) {
                    let contribution = match spec.kind {
                        TechKind::Battery => spec.crm_derate * net,
                        TechKind::Thermal | TechKind::NuclearLike => spec.crm_derate * installed,
                        TechKind::Vre | TechKind::Hydro => {
                            spec.crm_derate * v.case.cf(spec, s, t) * spec.max_availability * installed
                        }
                    };
                    capacity += c[s][t] * contribution;
                }
                if let (true, Some(h)) = (ppa, &prices.tmr_hourly) {
                    tmr += h[s][t] * net;
                }
            }
            if ppa {
                if let Some(a) = &prices.tmr_annual {
                    tmr += a[s] * annual_net;
                }
                if let Some(e) = &prices.excess_cap {
                    excess += e[s] * annual_net;
                }
            } else if spec.is_rps_eligible && !spec.is_storage() {
                if let Some(r) = &prices.rps {
                    rps += r[s] * annual_gen;
                }
            }
        }
        let cost = resource_cost(v, spec, tv).total();
        let per = |x: f64| x / installed;
        out.push(RevenueStack {
            id: spec.id.clone(),
            installed_mw: installed,
            is_ppa: ppa,
            electricity_sales: per(energy),
            capacity_reserve: per(capacity),
            rps: per(rps),
            tmr: per(tmr),
            excess_cap_charge: per(excess),
            total_revenue: per(energy + capacity + rps + tmr),
            total_cost: per(cost),
        });
    }
    Ok(out)
}
