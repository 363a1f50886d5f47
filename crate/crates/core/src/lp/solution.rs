use std::collections::HashMap;
use std::sync::Arc;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use super::{LinearProgram, LpError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
    /// The pivot budget ran out before a verdict was reached.
    IterationLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolveOptions {
    /// Primal feasibility tolerance, absolute, on the scaled problem.
    pub feas_tol: f64,
    /// Reduced-cost optimality tolerance, absolute, on the scaled problem.
    pub opt_tol: f64,
    /// Recorded with results; the simplex itself uses no randomness.
    pub seed: u64,
    /// Pivot budget; 0 means automatic.
    pub max_iterations: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { feas_tol: 1e-7, opt_tol: 1e-7, seed: 0, max_iterations: 0 }
    }
}

/// Names of the columns and rows a solution refers to.
#[derive(Debug)]
pub(crate) struct NameTable {
    pub vars: Vec<String>,
    pub rows: Vec<String>,
    var_map: HashMap<String, usize>,
    row_map: HashMap<String, usize>,
}

impl NameTable {
    pub fn from_lp(lp: &LinearProgram) -> Self {
        let vars: Vec<String> = lp.variables.iter().map(|v| v.name.clone()).collect();
        let rows: Vec<String> = lp.constraints.iter().map(|c| c.name.clone()).collect();
        let var_map = vars.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let row_map = rows.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        Self { vars, rows, var_map, row_map }
    }
}

/// Primal and dual result of a solve.
#[derive(Debug, Clone)]
pub struct Solution {
    pub status: Status,
    /// `c.x + offset` at the returned point (NaN unless optimal).
    pub objective: f64,
    pub primal: Vec<f64>,
    /// Shadow price per row, in objective units per unit of right-hand side.
    pub dual: Vec<f64>,
    pub reduced_costs: Vec<f64>,
    pub iterations: usize,
    pub(crate) names: Arc<NameTable>,
}

impl Solution {
    pub(crate) fn not_optimal(status: Status, lp: &LinearProgram, iterations: usize) -> Self {
        Self {
            status,
            objective: f64::NAN,
            primal: vec![f64::NAN; lp.num_vars()],
            dual: vec![f64::NAN; lp.num_rows()],
            reduced_costs: vec![f64::NAN; lp.num_vars()],
            iterations,
            names: Arc::new(NameTable::from_lp(lp)),
        }
    }

    pub fn from_parts(
        lp: &LinearProgram,
        status: Status,
        primal: Vec<f64>,
        dual: Vec<f64>,
        reduced_costs: Vec<f64>,
        iterations: usize,
    ) -> Self {
        let objective = if status == Status::Optimal { lp.objective_value(&primal) } else { f64::NAN };
        Self { status, objective, primal, dual, reduced_costs, iterations, names: Arc::new(NameTable::from_lp(lp)) }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }

    pub fn ensure_optimal(&self) -> Result<(), LpError> {
        if self.is_optimal() {
            Ok(())
        } else {
            Err(LpError::NotOptimal(self.status))
        }
    }

    /// Primal value of the named variable.
    pub fn value(&self, name: &str) -> Option<f64> {
        self.names.var_map.get(name).map(|&i| self.primal[i])
    }

    /// Shadow price of the named constraint.
    pub fn dual(&self, name: &str) -> Option<f64> {
        self.names.row_map.get(name).map(|&i| self.dual[i])
    }

    pub fn var_names(&self) -> &[String] {
        &self.names.vars
    }

    pub fn row_names(&self) -> &[String] {
        &self.names.rows
    }

    /// Dual objective `sum_i y_i b_i + sum_j d_j x_j + offset`; equals the
    /// primal objective at an optimal basis up to tolerance.
    pub fn dual_objective(&self, lp: &LinearProgram) -> f64 {
        let rows: f64 = lp.constraints.iter().zip(&self.dual).map(|(c, y)| c.rhs * y).sum();
        let cols: f64 = self.reduced_costs.iter().zip(&self.primal).map(|(d, x)| d * x).sum();
        rows + cols + lp.objective_offset
    }

    /// Largest `|dual * slack|` over all rows.
    pub fn complementarity_gap(&self, lp: &LinearProgram) -> f64 {
        lp.constraints
            .iter()
            .zip(&self.dual)
            .map(|(c, y)| (y * (c.activity(&self.primal) - c.rhs)).abs())
            .fold(0.0, f64::max)
    }
}

impl Serialize for Solution {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        struct Named<'a>(&'a [String], &'a [f64]);
        impl Serialize for Named<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.len()))?;
                for (k, v) in self.0.iter().zip(self.1) {
                    map.serialize_entry(k, v)?;
                }
                map.end()
            }
        }
        let mut map = s.serialize_map(Some(5))?;
        map.serialize_entry("status", &self.status)?;
        map.serialize_entry("objective", &self.objective)?;
        map.serialize_entry("iterations", &self.iterations)?;
        map.serialize_entry("primal", &Named(&self.names.vars, &self.primal))?;
        map.serialize_entry("dual", &Named(&self.names.rows, &self.dual))?;
        map.end()
    }
}
