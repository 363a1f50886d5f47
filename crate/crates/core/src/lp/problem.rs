//! Sparse linear-program data model.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::LpError;

/// Row sense of a constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sense {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Ge => ">=",
            Sense::Eq => "=",
        })
    }
}

/// Index of a variable (column) inside a [`LinearProgram`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VarId(pub usize);

/// Index of a constraint (row) inside a [`LinearProgram`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RowId(pub usize);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
    pub cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(VarId, f64)>,
    pub sense: Sense,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(name: impl Into<String>, terms: Vec<(VarId, f64)>, sense: Sense, rhs: f64) -> Self {
        Self { name: name.into(), terms, sense, rhs }
    }

    /// Row activity `a . x` for a primal point.
    pub fn activity(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|&(v, a)| a * x[v.0]).sum()
    }

    /// Amount by which `x` violates this row (0 when satisfied).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let act = self.activity(x);
        match self.sense {
            Sense::Le => (act - self.rhs).max(0.0),
            Sense::Ge => (self.rhs - act).max(0.0),
            Sense::Eq => (act - self.rhs).abs(),
        }
    }
}

/// A minimization LP: `min c.x + offset` subject to sparse rows and column bounds.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct LinearProgram {
    pub name: String,
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    /// Constant added to the objective (e.g. fixed cost of existing assets).
    pub objective_offset: f64,
}

impl LinearProgram {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), ..Default::default() }
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn num_rows(&self) -> usize {
        self.constraints.len()
    }

    pub fn add_var(&mut self, name: impl Into<String>, lower: f64, upper: f64, cost: f64) -> VarId {
        self.variables.push(Variable { name: name.into(), lower, upper, cost });
        VarId(self.variables.len() - 1)
    }

    pub fn add_constraint(&mut self, c: Constraint) -> RowId {
        self.constraints.push(c);
        RowId(self.constraints.len() - 1)
    }

    pub fn add_row(&mut self, name: impl Into<String>, terms: Vec<(VarId, f64)>, sense: Sense, rhs: f64) -> RowId {
        self.add_constraint(Constraint::new(name, terms, sense, rhs))
    }

    /// Objective value `c.x + offset`.
    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective_offset + self.variables.iter().zip(x).map(|(v, xi)| v.cost * xi).sum::<f64>()
    }

    /// Largest bound or row violation of a primal point.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let bounds =
            self.variables.iter().zip(x).map(|(v, &xi)| (v.lower - xi).max(xi - v.upper).max(0.0)).fold(0.0, f64::max);
        self.constraints.iter().map(|c| c.violation(x)).fold(bounds, f64::max)
    }

    pub fn var_index(&self) -> HashMap<&str, VarId> {
        self.variables.iter().enumerate().map(|(i, v)| (v.name.as_str(), VarId(i))).collect()
    }

    pub fn row_index(&self) -> HashMap<&str, RowId> {
        self.constraints.iter().enumerate().map(|(i, c)| (c.name.as_str(), RowId(i))).collect()
    }

    /// Drops explicit zero coefficients and merges nothing else.
    pub fn drop_zero_coefficients(&mut self) {
        for c in &mut self.constraints {
            c.terms.retain(|&(_, a)| a != 0.0);
        }
    }

    /// Checks structural invariants: finite data, consistent bounds, in-range
    /// indices, no repeated column within a row, unique names.
    pub fn validate(&self) -> Result<(), LpError> {
        let n = self.variables.len();
        if !self.objective_offset.is_finite() {
            return Err(LpError::NonFinite { what: "objective offset".into() });
        }
        let mut seen = HashMap::with_capacity(n);
        for (j, v) in self.variables.iter().enumerate() {
            if v.name.is_empty() {
                return Err(LpError::InvalidName { name: String::new(), reason: "empty name" });
            }
            if seen.insert(v.name.as_str(), j).is_some() {
                return Err(LpError::DuplicateName(v.name.clone()));
            }
            if !v.cost.is_finite() || v.lower.is_nan() || v.upper.is_nan() {
                return Err(LpError::NonFinite { what: format!("variable `{}`", v.name) });
            }
            if v.lower == f64::INFINITY || v.upper == f64::NEG_INFINITY {
                return Err(LpError::InvalidBounds { name: v.name.clone(), lower: v.lower, upper: v.upper });
            }
            if v.lower > v.upper {
                return Err(LpError::InvalidBounds { name: v.name.clone(), lower: v.lower, upper: v.upper });
            }
        }
        let mut seen_rows = HashMap::with_capacity(self.constraints.len());
        let mut mark = vec![usize::MAX; n];
        for (i, c) in self.constraints.iter().enumerate() {
            if c.name.is_empty() {
                return Err(LpError::InvalidName { name: String::new(), reason: "empty name" });
            }
            if seen_rows.insert(c.name.as_str(), i).is_some() {
                return Err(LpError::DuplicateName(c.name.clone()));
            }
            if !c.rhs.is_finite() {
                return Err(LpError::NonFinite { what: format!("rhs of `{}`", c.name) });
            }
            for &(v, a) in &c.terms {
                if v.0 >= n {
                    return Err(LpError::DimensionMismatch { row: c.name.clone(), index: v.0, num_vars: n });
                }
                if !a.is_finite() {
                    return Err(LpError::NonFinite { what: format!("coefficient in `{}`", c.name) });
                }
                if mark[v.0] == i {
                    return Err(LpError::DuplicateEntry { row: c.name.clone(), var: self.variables[v.0].name.clone() });
                }
                mark[v.0] = i;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_catches_duplicates_and_bad_bounds() {
        let mut lp = LinearProgram::new("t");
        let x = lp.add_var("x", 0.0, 1.0, 1.0);
        lp.add_row("r", vec![(x, 1.0), (x, 2.0)], Sense::Le, 1.0);
        assert!(matches!(lp.validate(), Err(LpError::DuplicateEntry { .. })));

        let mut lp = LinearProgram::new("t");
        lp.add_var("x", 2.0, 1.0, 1.0);
        assert!(matches!(lp.validate(), Err(LpError::InvalidBounds { .. })));

        let mut lp = LinearProgram::new("t");
        lp.add_var("x", 0.0, 1.0, 1.0);
        lp.add_var("x", 0.0, 1.0, 1.0);
        assert!(matches!(lp.validate(), Err(LpError::DuplicateName(_))));
    }

    #[test]
    fn validate_rejects_out_of_range_column() {
        let mut lp = LinearProgram::new("t");
        lp.add_var("x", 0.0, 1.0, 1.0);
        lp.add_row("r", vec![(VarId(3), 1.0)], Sense::Le, 1.0);
        assert!(matches!(lp.validate(), Err(LpError::DimensionMismatch { index: 3, .. })));
    }

    #[test]
    fn violation_by_sense() {
        let c = Constraint::new("c", vec![(VarId(0), 2.0)], Sense::Ge, 4.0);
        assert_eq!(c.violation(&[1.0]), 2.0);
        assert_eq!(c.violation(&[3.0]), 0.0);
    }
}
