//! Lookup of shadow prices for an indexed constraint family such as
//! `power_balance[s,t]` or `rps[s]`.

use std::collections::BTreeMap;

use super::{LpError, Solution};

/// Duals of one constraint family ordered by (scenario, hour).
///
/// A gap in the index space (a row that was never emitted) is `None`,
/// never a silent zero.
#[derive(Debug, Clone, PartialEq)]
pub struct DualSeries {
    pub prefix: String,
    /// `values[s][t]`; families indexed by scenario only have one entry per scenario.
    pub values: Vec<Vec<Option<f64>>>,
}

impl DualSeries {
    pub fn scenario(&self, s: usize) -> &[Option<f64>] {
        self.values.get(s).map_or(&[], |v| v.as_slice())
    }

    pub fn get(&self, s: usize, t: usize) -> Option<f64> {
        self.values.get(s).and_then(|v| v.get(t)).copied().flatten()
    }

    /// Scenario series with absent entries read as zero.
    pub fn dense(&self, s: usize) -> Vec<f64> {
        self.scenario(s).iter().map(|v| v.unwrap_or(0.0)).collect()
    }

    pub fn len(&self) -> usize {
        self.values.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Parses `prefix[a]` or `prefix[a,b]` into indices.
pub(crate) fn parse_indexed(name: &str, prefix: &str) -> Option<(usize, Option<usize>)> {
    let rest = name.strip_prefix(prefix)?.strip_prefix('[')?.strip_suffix(']')?;
    let mut parts = rest.split(',');
    let a = parts.next()?.trim().parse().ok()?;
    let b = match parts.next() {
        Some(p) => Some(p.trim().parse().ok()?),
        None => None,
    };
    if parts.next().is_some() {
        return None;
    }
    Some((a, b))
}

/// Collects the duals of every row named `prefix[s,t]` (or `prefix[s]`).
pub fn dual_series(sol: &Solution, prefix: &str) -> Result<DualSeries, LpError> {
    sol.ensure_optimal()?;
    let mut found: BTreeMap<usize, BTreeMap<usize, f64>> = BTreeMap::new();
    for (i, name) in sol.row_names().iter().enumerate() {
        if let Some((s, t)) = parse_indexed(name, prefix) {
            found.entry(s).or_default().insert(t.unwrap_or(0), sol.dual[i]);
        }
    }
    if found.is_empty() {
        return Err(LpError::UnknownPrefix(prefix.to_string()));
    }
    let n_s = found.keys().next_back().map_or(0, |&s| s + 1);
    let n_t = found.values().filter_map(|m| m.keys().next_back()).max().map_or(0, |&t| t + 1);
    let mut values = vec![vec![None; n_t]; n_s];
    for (s, row) in found {
        for (t, v) in row {
            values[s][t] = Some(v);
        }
    }
    Ok(DualSeries { prefix: prefix.to_string(), values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{solve, LinearProgram, Sense, SolveOptions};

    #[test]
    fn parses_names() {
        assert_eq!(parse_indexed("crm[2,17]", "crm"), Some((2, Some(17))));
        assert_eq!(parse_indexed("rps[3]", "rps"), Some((3, None)));
        assert_eq!(parse_indexed("rps_x[3]", "rps"), None);
        assert_eq!(parse_indexed("soc_bat[0,1]", "soc_bat"), Some((0, Some(1))));
    }

    #[test]
    fn gaps_are_absent_not_zero() {
        let mut lp = LinearProgram::new("t");
        let x = lp.add_var("x", 0.0, 10.0, 1.0);
        lp.add_row("f[0,0]", vec![(x, 1.0)], Sense::Ge, 1.0);
        lp.add_row("f[0,2]", vec![(x, 1.0)], Sense::Ge, 2.0);
        let sol = solve(&lp, &SolveOptions::default()).unwrap();
        let d = dual_series(&sol, "f").unwrap();
        assert_eq!(d.values[0].len(), 3);
        assert_eq!(d.get(0, 1), None);
        assert!((d.get(0, 2).unwrap() - 1.0).abs() < 1e-12);
        assert!(matches!(dual_series(&sol, "g"), Err(LpError::UnknownPrefix(_))));
    }
}
