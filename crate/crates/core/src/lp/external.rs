//! External solver backend.
//!
//! The backend is a command that is invoked as `<command...> <model.mps>
//! <solution.txt>` and must write a plain-text solution file:
//!
//! ```text
//! status optimal
//! objective 123.5
//! primal <column-name> <value>
//! dual <row-name> <value>
//! ```
//!
//! Row duals must follow the minimization convention used throughout this
//! crate (see the module docs of [`crate::lp`]). Backends that do not report
//! a dual for every row are rejected.

use std::collections::HashMap;
use std::path::Path;
use std::process::Command;

use super::{mps, LinearProgram, LpError, Solution, Status};

/// Parses the solution text written by a backend.
pub fn parse_solution(lp: &LinearProgram, text: &str) -> Result<Solution, LpError> {
    let mut status = None;
    let mut primal: HashMap<&str, f64> = HashMap::new();
    let mut dual: HashMap<&str, f64> = HashMap::new();
    for (ln, line) in text.lines().enumerate() {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() || toks[0].starts_with('#') {
            continue;
        }
        let bad = |msg: String| LpError::Parse { line: ln + 1, msg };
        let num = |t: &str| t.parse::<f64>().map_err(|_| bad(format!("bad number `{t}`")));
        match (toks[0], toks.len()) {
            ("status", 2) => {
                status = Some(match toks[1] {
                    "optimal" => Status::Optimal,
                    "infeasible" => Status::Infeasible,
                    "unbounded" => Status::Unbounded,
                    "iteration_limit" => Status::IterationLimit,
                    other => return Err(bad(format!("unknown status `{other}`"))),
                })
            }
            ("objective", 2) => {
                num(toks[1])?;
            }
            ("primal", 3) => {
                primal.insert(toks[1], num(toks[2])?);
            }
            ("dual", 3) => {
                dual.insert(toks[1], num(toks[2])?);
            }
            _ => return Err(bad(format!("unrecognized line `{line}`"))),
        }
    }
    let status = status.ok_or_else(|| LpError::External("solution file has no status".into()))?;
    if status != Status::Optimal {
        return Ok(Solution::not_optimal(status, lp, 0));
    }
    let x: Vec<f64> = lp
        .variables
        .iter()
        .map(|v| {
            primal
                .get(v.name.as_str())
                .copied()
                .ok_or_else(|| LpError::External(format!("no primal value for `{}`", v.name)))
        })
        .collect::<Result<_, _>>()?;
    let y: Vec<f64> = lp
        .constraints
        .iter()
        .map(|c| {
            dual.get(c.name.as_str())
                .copied()
                .ok_or_else(|| LpError::External(format!("backend reported no dual for `{}`", c.name)))
        })
        .collect::<Result<_, _>>()?;
    let mut reduced: Vec<f64> = lp.variables.iter().map(|v| v.cost).collect();
    for (c, yi) in lp.constraints.iter().zip(&y) {
        for &(v, a) in &c.terms {
            reduced[v.0] -= yi * a;
        }
    }
    Ok(Solution::from_parts(lp, status, x, y, reduced, 0))
}

/// Writes `lp` as MPS into `workdir`, runs the backend and reads its solution.
pub fn solve_external(lp: &LinearProgram, command: &[String], workdir: &Path) -> Result<Solution, LpError> {
    let (prog, args) = command.split_first().ok_or_else(|| LpError::External("empty backend command".into()))?;
    std::fs::create_dir_all(workdir)?;
    let model = workdir.join("model.mps");
    let sol_path = workdir.join("solution.txt");
    let mut f = std::io::BufWriter::new(std::fs::File::create(&model)?);
    mps::write(lp, &mut f)?;
    std::io::Write::flush(&mut f)?;
    drop(f);
    let _ = std::fs::remove_file(&sol_path);
    let out = Command::new(prog)
        .args(args)
        .arg(&model)
        .arg(&sol_path)
        .output()
        .map_err(|e| LpError::External(format!("cannot launch `{prog}`: {e}")))?;
    if !out.status.success() {
        return Err(LpError::External(format!(
            "`{prog}` exited with {}: {}",
            out.status,
            String::from_utf8_lossy(&out.stderr).trim()
        )));
    }
    let text = std::fs::read_to_string(&sol_path)?;
    parse_solution(lp, &text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::Sense;

    #[test]
    fn missing_duals_are_rejected() {
        let mut lp = LinearProgram::new("t");
        let x = lp.add_var("x", 0.0, 10.0, 1.0);
        lp.add_row("c", vec![(x, 1.0)], Sense::Ge, 3.0);
        let err = parse_solution(&lp, "status optimal\nobjective 3\nprimal x 3\n").unwrap_err();
        assert!(err.to_string().contains("no dual"));
        let sol = parse_solution(&lp, "status optimal\nprimal x 3\ndual c 1\n").unwrap();
        assert_eq!(sol.objective, 3.0);
        assert_eq!(sol.reduced_costs, vec![0.0]);
    }
}
