//! Metrics computed from solved runs: emissions, LCOH, curtailment, prices,
//! revenue stacks, robustness and cross-run comparison outputs.
//!
//! Raw row duals carry the objective weight `σ_s · hour_weight`. Dollar
//! totals multiply raw duals by quantities directly; prices divide by that
//! weight first.

mod compare;
mod costs;
mod emissions;
pub mod plots;
mod prices;
mod robustness;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::domain::SystemCase;
use crate::lp::{LpError, Solution, Status, VarId};
use crate::model::{Capacities, Grid, Model};

pub use compare::{write_comparisons, Provenance, COMPARISON_FILES};
pub use costs::{eac_cost, lcoh, resource_cost, revenue_stack, LcohBreakdown, ResourceCost, RevenueStack};
pub use emissions::{consequential_emissions, emissions_delta_per_tonne, emissions_total};
pub use prices::{price_report, Histogram, PriceReport, Prices};
pub use robustness::{matching_series, robustness_from_series, robustness_metrics, Robustness};

#[derive(Debug, thiserror::Error)]
pub enum AnalysisError {
    #[error("solution is not optimal ({0:?})")]
    NotOptimal(Status),
    #[error("missing duals: {0}")]
    MissingDuals(String),
    #[error("no hydrogen produced")]
    NoProduction,
    #[error("{0}")]
    InvalidInput(String),
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// A solved model together with the case it was built from.
#[derive(Clone, Copy)]
pub struct Solved<'a> {
    pub case: &'a SystemCase,
    pub model: &'a Model,
    pub sol: &'a Solution,
}

impl<'a> Solved<'a> {
    pub fn new(case: &'a SystemCase, model: &'a Model, sol: &'a Solution) -> Result<Self, AnalysisError> {
        if !sol.is_optimal() {
            return Err(AnalysisError::NotOptimal(sol.status));
        }
        Ok(Solved { case, model, sol })
    }

    pub fn x(&self, v: VarId) -> f64 {
        self.sol.primal[v.0]
    }

    /// Expected annual total of an hourly quantity: Σ_s σ_s·w·Σ_t x.
    pub fn annual(&self, g: &Grid) -> f64 {
        (0..self.model.vars.scenarios)
            .map(|s| self.model.op_weight(s) * g.scenario(s).iter().map(|&v| self.x(v)).sum::<f64>())
            .sum()
    }
}

/// Curtailed over available energy per VRE and hydro technology, in [0, 1].
pub fn curtailment(v: &Solved) -> BTreeMap<String, f64> {
    let mut out = BTreeMap::new();
    for (spec, tv) in v.case.technologies.iter().zip(&v.model.vars.techs) {
        if !spec.uses_cf() {
            continue;
        }
        let installed =
            spec.existing_capacity + tv.cap_new.map_or(0.0, |x| v.x(x)) - tv.retired.map_or(0.0, |x| v.x(x));
        let (mut avail, mut gen) = (0.0, 0.0);
        for s in 0..v.model.vars.scenarios {
            let w = v.model.op_weight(s);
            for t in 0..v.model.vars.hours {
                avail += w * v.case.cf(spec, s, t) * spec.max_availability * installed;
                gen += w * v.x(tv.gen.at(s, t));
            }
        }
        let frac = if avail > 1e-9 { ((avail - gen) / avail).clamp(0.0, 1.0) } else { 0.0 };
        out.insert(spec.id.clone(), frac);
    }
    out
}

/// Expected annual generation (discharge for storage) per technology, MWh.
pub fn generation(v: &Solved) -> BTreeMap<String, f64> {
    v.case.technologies.iter().zip(&v.model.vars.techs).map(|(spec, tv)| (spec.id.clone(), v.annual(&tv.gen))).collect()
}

/// Every metric of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub label: String,
    pub objective: f64,
    pub capacities: Capacities,
    /// MWh/yr per technology.
    pub generation_mwh: BTreeMap<String, f64>,
    /// tCO2/yr.
    pub emissions_t: f64,
    /// tH2/yr.
    pub h2_production_t: f64,
    pub unserved_energy_mwh: f64,
    pub unserved_h2_t: f64,
    pub lcoh: Option<LcohBreakdown>,
    /// tCO2/tH2 against the matching no-hydrogen run, when one exists.
    pub consequential_emissions: Option<f64>,
    pub curtailment: BTreeMap<String, f64>,
    pub prices: PriceReport,
    pub revenue: Vec<RevenueStack>,
    pub robustness: Option<Robustness>,
}

/// Builds the report of a solved run. `slack_tol` decides which hours count
/// as unmet in dispatch runs.
pub fn build_report(v: &Solved, label: &str, slack_tol: f64) -> Result<CaseReport, AnalysisError> {
    let prices = Prices::extract(v.sol, v.model)?;
    let vars = &v.model.vars;
    let h2_production_t = vars.h2.as_ref().map_or(0.0, |h| v.annual(&h.gen));
    let lcoh = if h2_production_t > 0.0 { Some(lcoh(v, &prices)?) } else { None };
    let robustness = match vars.tmr_slack {
        Some(_) => Some(robustness_metrics(v, slack_tol)?),
        None => None,
    };
    Ok(CaseReport {
        label: label.to_string(),
        objective: v.sol.objective,
        capacities: Capacities::extract(v.case, vars, v.sol),
        generation_mwh: generation(v),
        emissions_t: emissions_total(v),
        h2_production_t,
        unserved_energy_mwh: v.annual(&vars.nse_power),
        unserved_h2_t: vars.h2.as_ref().map_or(0.0, |h| v.annual(&h.nse)),
        lcoh,
        consequential_emissions: None,
        curtailment: curtailment(v),
        prices: price_report(&prices, &v.case.demand.grid_load, v.model.hour_weight),
        revenue: revenue_stack(v, &prices)?,
        robustness,
    })
}
