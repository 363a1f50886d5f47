//! Variable index space of the planning LP.
//!
//! First-stage variables (capacities, retirements) have no scenario index;
//! operational variables are indexed `[s][t]`. Variable names mirror the
//! row naming scheme with 0-based indices, e.g. `gen_ngcc[0,12]`.

use serde::{Deserialize, Serialize};

use crate::domain::{SystemCase, TechKind, TechnologySpec, TmrKind};
use crate::lp::{LinearProgram, VarId};

use super::{Mode, ModelError};

/// Operational variables indexed by scenario then hour.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Grid(pub Vec<Vec<VarId>>);

impl Grid {
    fn alloc(lp: &mut LinearProgram, base: &str, s: usize, t: usize, upper: impl Fn(usize, usize) -> f64) -> Self {
        Grid(
            (0..s)
                .map(|si| (0..t).map(|ti| lp.add_var(format!("{base}[{si},{ti}]"), 0.0, upper(si, ti), 0.0)).collect())
                .collect(),
        )
    }

    pub fn at(&self, s: usize, t: usize) -> VarId {
        self.0[s][t]
    }

    pub fn scenario(&self, s: usize) -> &[VarId] {
        &self.0[s]
    }

    /// Previous hour with cyclic wrap.
    pub fn prev(&self, s: usize, t: usize) -> VarId {
        let row = &self.0[s];
        row[(t + row.len() - 1) % row.len()]
    }
}

/// Linearized commitment state of a thermal technology, all in MW.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommitVars {
    pub on: Grid,
    pub start: Grid,
    pub shut: Grid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StorageVars {
    pub charge: Grid,
    /// State of charge, MWh.
    pub energy: Grid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TechVars {
    pub cap_new: Option<VarId>,
    pub retired: Option<VarId>,
    /// New storage energy capacity, MWh.
    pub energy_new: Option<VarId>,
    pub energy_retired: Option<VarId>,
    /// Generation; discharge for storage.
    pub gen: Grid,
    pub commit: Option<CommitVars>,
    pub storage: Option<StorageVars>,
}

impl TechVars {
    /// Installed power as `(terms, constant)`: existing + new - retired.
    pub fn power(&self, spec: &TechnologySpec) -> (Vec<(VarId, f64)>, f64) {
        let mut terms = Vec::new();
        if let Some(v) = self.cap_new {
            terms.push((v, 1.0));
        }
        if let Some(v) = self.retired {
            terms.push((v, -1.0));
        }
        (terms, spec.existing_capacity)
    }

    /// Installed storage energy as `(terms, constant)`.
    pub fn energy(&self, spec: &TechnologySpec) -> (Vec<(VarId, f64)>, f64) {
        let mut terms = Vec::new();
        if let Some(v) = self.energy_new {
            terms.push((v, 1.0));
        }
        if let Some(v) = self.energy_retired {
            terms.push((v, -1.0));
        }
        (terms, spec.existing_energy_capacity)
    }
}

/// Hydrogen project variables. Electrolyzer capacity is MW electric,
/// storage tonnes, compressor t/h; flows are t/h and levels tonnes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct H2Vars {
    pub electrolyzer: VarId,
    pub storage: VarId,
    pub compressor: VarId,
    pub gen: Grid,
    pub charge: Grid,
    pub discharge: Grid,
    pub level: Grid,
    pub nse: Grid,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariableIndex {
    pub scenarios: usize,
    pub hours: usize,
    /// Aligned with `case.technologies`.
    pub techs: Vec<TechVars>,
    pub h2: Option<H2Vars>,
    pub nse_power: Grid,
    pub rps_slack: Option<Vec<VarId>>,
    /// Unmatched electrolyzer consumption, MW (dispatch mode with hourly matching).
    pub tmr_slack: Option<Grid>,
    /// Capacity reserve shortfall, MW (dispatch mode).
    pub crm_slack: Option<Grid>,
}

impl VariableIndex {
    /// Adds every variable of `case` to `lp` with zero cost and returns the index.
    pub fn allocate(case: &SystemCase, mode: &Mode, lp: &mut LinearProgram) -> Result<Self, ModelError> {
        let (ns, nt) = (case.scenarios.len(), case.hours());
        let fixed = match mode {
            Mode::Dispatch(c) => Some(c),
            _ => None,
        };
        let pin = |lp: &mut LinearProgram, name: String, lower: f64, upper: f64, value: Option<f64>| match value {
            Some(v) => lp.add_var(name, v, v, 0.0),
            None => lp.add_var(name, lower, upper, 0.0),
        };
        let lookup = |id: &str| -> Result<_, ModelError> {
            match fixed {
                Some(c) => c.tech(id).map(Some).ok_or_else(|| {
                    ModelError::builder("capacities", format!("design has no capacity for technology `{id}`"))
                }),
                None => Ok(None),
            }
        };

        let mut techs = Vec::with_capacity(case.technologies.len());
        for spec in &case.technologies {
            let id = &spec.id;
            let design = lookup(id)?;
            let cap_new = spec.expandable.then(|| {
                let ub = spec.max_capacity.map_or(f64::INFINITY, |m| m - spec.existing_capacity);
                pin(lp, format!("cap_new_{id}"), 0.0, ub, design.map(|d| d.power_new))
            });
            let retired = (spec.retirable && spec.existing_capacity > 0.0).then(|| {
                pin(lp, format!("retired_{id}"), 0.0, spec.existing_capacity, design.map(|d| d.power_retired))
            });
            let storage = spec.is_storage();
            let energy_new = (storage && spec.expandable)
                .then(|| pin(lp, format!("cap_energy_{id}"), 0.0, f64::INFINITY, design.map(|d| d.energy_new)));
            let energy_retired = (storage && spec.retirable && spec.existing_energy_capacity > 0.0).then(|| {
                pin(
                    lp,
                    format!("retired_energy_{id}"),
                    0.0,
                    spec.existing_energy_capacity,
                    design.map(|d| d.energy_retired),
                )
            });
            let gen_base = if storage { format!("discharge_{id}") } else { format!("gen_{id}") };
            let gen = Grid::alloc(lp, &gen_base, ns, nt, |_, _| f64::INFINITY);
            let commit = (spec.kind == TechKind::Thermal).then(|| CommitVars {
                on: Grid::alloc(lp, &format!("on_{id}"), ns, nt, |_, _| f64::INFINITY),
                start: Grid::alloc(lp, &format!("start_{id}"), ns, nt, |_, _| f64::INFINITY),
                shut: Grid::alloc(lp, &format!("shut_{id}"), ns, nt, |_, _| f64::INFINITY),
            });
            let storage = storage.then(|| StorageVars {
                charge: Grid::alloc(lp, &format!("charge_{id}"), ns, nt, |_, _| f64::INFINITY),
                energy: Grid::alloc(lp, &format!("energy_{id}"), ns, nt, |_, _| f64::INFINITY),
            });
            techs.push(TechVars { cap_new, retired, energy_new, energy_retired, gen, commit, storage });
        }

        let h2 = match &case.h2_project {
            Some(h) => {
                let d = fixed.map(|c| &c.h2);
                let limit = h.h2_store_cap_limit.unwrap_or(f64::INFINITY);
                let demand = &case.demand.h2_demand;
                Some(H2Vars {
                    electrolyzer: pin(lp, "cap_electrolyzer".into(), 0.0, f64::INFINITY, d.map(|d| d.electrolyzer_mw)),
                    storage: pin(lp, "cap_h2_storage".into(), 0.0, limit, d.map(|d| d.storage_tonnes)),
                    compressor: pin(lp, "cap_compressor".into(), 0.0, f64::INFINITY, d.map(|d| d.compressor_tph)),
                    gen: Grid::alloc(lp, "h2_gen", ns, nt, |_, _| f64::INFINITY),
                    charge: Grid::alloc(lp, "h2_charge", ns, nt, |_, _| f64::INFINITY),
                    discharge: Grid::alloc(lp, "h2_discharge", ns, nt, |_, _| f64::INFINITY),
                    level: Grid::alloc(lp, "h2_level", ns, nt, |_, _| f64::INFINITY),
                    nse: Grid::alloc(lp, "nse_h2", ns, nt, |_, t| demand[t]),
                })
            }
            None => None,
        };

        let load = &case.demand.grid_load;
        let nse_power = Grid::alloc(lp, "nse_power", ns, nt, |_, t| load[t]);
        let rps_slack = case
            .policy
            .rps_kappa
            .map(|_| (0..ns).map(|s| lp.add_var(format!("rps_slack[{s}]"), 0.0, f64::INFINITY, 0.0)).collect());
        let dispatch = fixed.is_some();
        let tmr_slack = (dispatch && case.policy.tmr == TmrKind::Hourly && h2.is_some())
            .then(|| Grid::alloc(lp, "tmr_slack", ns, nt, |_, _| f64::INFINITY));
        let crm_slack = (dispatch && case.policy.crm_alpha.is_some())
            .then(|| Grid::alloc(lp, "crm_slack", ns, nt, |_, _| f64::INFINITY));

        Ok(VariableIndex { scenarios: ns, hours: nt, techs, h2, nse_power, rps_slack, tmr_slack, crm_slack })
    }
}
