//! Translation of a [`SystemCase`] into a [`LinearProgram`].
//!
//! Operational quantities are per modeled hour. The objective annualizes them
//! with `σ_s · hour_weight`, so a row dual divided by that factor is a price
//! in $/unit.
//!
//! Row families and their names:
//!
//! | family | rows |
//! |---|---|
//! | balances | `power_balance[s,t]`, `h2_balance[s,t]` |
//! | thermal | `commit_cap_<g>`, `gen_max_<g>`, `gen_min_<g>`, `commit_<g>`, `ramp_up_<g>`, `ramp_dn_<g>` (all `[s,t]`) |
//! | VRE, firm, storage | `avail_<g>[s,t]`, `gen_min_<g>[s,t]`, `soc_<g>[s,t]`, `soc_max_<g>[s,t]`, `charge_max_<g>[s,t]`, `discharge_max_<g>[s,t]`, `dur_min_<g>`, `dur_max_<g>` |
//! | hydrogen | `ely_max[s,t]`, `ely_min[s,t]`, `ely_ramp_up[s,t]`, `ely_ramp_dn[s,t]`, `h2_soc[s,t]`, `h2_level_max[s,t]`, `h2_charge_max[s,t]` |
//! | policy | `crm[s,t]`, `rps[s]`, `tmr_hourly[s,t]`, `tmr_annual[s]`, `excess_cap[s]` |

mod balance;
mod h2;
mod objective;
mod policy;
mod storage;
mod thermal;
mod vars;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::domain::{validate_case, SystemCase, Violation};
use crate::lp::{Constraint, LinearProgram, LpError, Sense, Solution, VarId};

pub use balance::build_balances;
pub use h2::build_h2_assets;
pub use objective::{build_objective, Objective};
pub use policy::{build_crm, build_rps, build_tmr};
pub use storage::build_vre_and_storage;
pub use thermal::build_thermal;
pub use vars::{CommitVars, Grid, H2Vars, StorageVars, TechVars, VariableIndex};

#[derive(Debug, Clone, PartialEq)]
pub enum Mode {
    /// Single scenario with weight 1.
    Deterministic,
    /// All scenarios of the case weighted by their probabilities.
    Stochastic,
    /// Capacities fixed to a design; matching and reserve shortfalls become
    /// penalized slack.
    Dispatch(Capacities),
}

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("invalid case: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("{family}: {msg}")]
    Builder { family: &'static str, msg: String },
    #[error(transparent)]
    Lp(#[from] LpError),
}

impl ModelError {
    pub(crate) fn builder(family: &'static str, msg: impl Into<String>) -> Self {
        ModelError::Builder { family, msg: msg.into() }
    }
}

/// Shared inputs of the row builders.
pub struct Ctx<'a> {
    pub case: &'a SystemCase,
    pub vars: &'a VariableIndex,
    pub mode: &'a Mode,
}

impl Ctx<'_> {
    /// Scenario probability used in the objective.
    pub fn sigma(&self, s: usize) -> f64 {
        match self.mode {
            Mode::Deterministic => 1.0,
            _ => self.case.scenarios[s].weight,
        }
    }

    /// Objective weight of one modeled hour of scenario `s`.
    pub fn op_weight(&self, s: usize) -> f64 {
        self.sigma(s) * self.case.hour_weight()
    }

    pub fn is_dispatch(&self) -> bool {
        matches!(self.mode, Mode::Dispatch(_))
    }
}

/// Builds a row, merging repeated columns (cyclic links on one-hour
/// horizons) and dropping zero coefficients.
pub(crate) fn row(name: String, mut terms: Vec<(VarId, f64)>, sense: Sense, rhs: f64) -> Constraint {
    terms.sort_by_key(|&(v, _)| v);
    let mut merged: Vec<(VarId, f64)> = Vec::with_capacity(terms.len());
    for (v, a) in terms {
        match merged.last_mut() {
            Some((last, acc)) if *last == v => *acc += a,
            _ => merged.push((v, a)),
        }
    }
    merged.retain(|&(_, a)| a != 0.0);
    Constraint::new(name, merged, sense, rhs)
}

/// The assembled LP with its variable index.
#[derive(Debug, Clone)]
pub struct Model {
    pub lp: LinearProgram,
    pub vars: VariableIndex,
    /// Scenario probabilities used in the objective.
    pub sigma: Vec<f64>,
    pub hour_weight: f64,
}

impl Model {
    /// Objective weight of one modeled hour of scenario `s`; dividing a row
    /// dual by it gives a price per unit.
    pub fn op_weight(&self, s: usize) -> f64 {
        self.sigma[s] * self.hour_weight
    }
}

/// Composes every builder into one LP.
pub fn assemble(case: &SystemCase, mode: Mode) -> Result<Model, ModelError> {
    let violations = validate_case(case);
    if !violations.is_empty() {
        return Err(ModelError::Invalid(violations));
    }
    if mode == Mode::Deterministic && case.scenarios.len() != 1 {
        return Err(ModelError::builder(
            "objective",
            format!("deterministic mode needs exactly one scenario, got {}", case.scenarios.len()),
        ));
    }
    let mut lp = LinearProgram::new(case.label.clone());
    let vars = VariableIndex::allocate(case, &mode, &mut lp)?;
    let ctx = Ctx { case, vars: &vars, mode: &mode };

    let families: [fn(&Ctx) -> Result<Vec<Constraint>, ModelError>; 7] =
        [build_balances, build_thermal, build_vre_and_storage, build_h2_assets, build_crm, build_rps, build_tmr];
    for build in families {
        for c in build(&ctx)? {
            lp.add_constraint(c);
        }
    }
    let obj = build_objective(&ctx)?;
    for (v, c) in obj.costs {
        lp.variables[v.0].cost += c;
    }
    lp.objective_offset = obj.offset;
    lp.validate()?;
    let sigma = (0..vars.scenarios).map(|s| ctx.sigma(s)).collect();
    Ok(Model { lp, vars, sigma, hour_weight: case.hour_weight() })
}

/// Built capacities of one technology.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TechCapacity {
    pub id: String,
    pub power_new: f64,
    pub power_retired: f64,
    /// Existing + new - retired, MW.
    pub power_total: f64,
    pub energy_new: f64,
    pub energy_retired: f64,
    /// MWh (storage only).
    pub energy_total: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct H2Capacity {
    pub electrolyzer_mw: f64,
    pub storage_tonnes: f64,
    pub compressor_tph: f64,
}

/// First-stage decisions of a solved design.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Capacities {
    pub techs: Vec<TechCapacity>,
    pub h2: H2Capacity,
}

impl Capacities {
    pub fn tech(&self, id: &str) -> Option<&TechCapacity> {
        self.techs.iter().find(|t| t.id == id)
    }

    pub fn extract(case: &SystemCase, vars: &VariableIndex, sol: &Solution) -> Self {
        let val = |v: Option<VarId>| v.map_or(0.0, |v| sol.primal[v.0]);
        let techs = case
            .technologies
            .iter()
            .zip(&vars.techs)
            .map(|(spec, tv)| {
                let (power_new, power_retired) = (val(tv.cap_new), val(tv.retired));
                let (energy_new, energy_retired) = (val(tv.energy_new), val(tv.energy_retired));
                TechCapacity {
                    id: spec.id.clone(),
                    power_new,
                    power_retired,
                    power_total: spec.existing_capacity + power_new - power_retired,
                    energy_new,
                    energy_retired,
                    energy_total: if spec.is_storage() {
                        spec.existing_energy_capacity + energy_new - energy_retired
                    } else {
                        0.0
                    },
                }
            })
            .collect();
        let h2 = vars.h2.as_ref().map_or_else(H2Capacity::default, |h| H2Capacity {
            electrolyzer_mw: sol.primal[h.electrolyzer.0],
            storage_tonnes: sol.primal[h.storage.0],
            compressor_tph: sol.primal[h.compressor.0],
        });
        Capacities { techs, h2 }
    }

    /// Installed power by technology id.
    pub fn power_by_tech(&self) -> BTreeMap<String, f64> {
        self.techs.iter().map(|t| (t.id.clone(), t.power_total)).collect()
    }
}
