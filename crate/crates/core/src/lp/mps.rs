//! Free-format MPS writer and reader.
//!
//! The objective constant is stored as the negated right-hand side of the
//! objective row, which is how most solvers read it. Columns are written in
//! index order and rows in index order, so output is deterministic.

use std::collections::HashMap;
use std::io::Write;

use super::{LinearProgram, LpError, Sense, VarId};

pub(crate) const MAX_NAME_LEN: usize = 255;

pub(crate) fn check_name(name: &str) -> Result<(), LpError> {
    if name.is_empty() {
        return Err(LpError::InvalidName { name: name.into(), reason: "empty name" });
    }
    if name.len() > MAX_NAME_LEN {
        return Err(LpError::InvalidName { name: name.into(), reason: "longer than 255 characters" });
    }
    if name.chars().any(|c| c.is_whitespace() || c.is_control()) {
        return Err(LpError::InvalidName { name: name.into(), reason: "contains whitespace" });
    }
    Ok(())
}

fn objective_row_name(lp: &LinearProgram) -> String {
    let mut name = String::from("obj");
    while lp.constraints.iter().any(|c| c.name == name) {
        name.push('_');
    }
    name
}

pub fn write<W: Write>(lp: &LinearProgram, out: &mut W) -> Result<(), LpError> {
    lp.validate()?;
    for v in &lp.variables {
        check_name(&v.name)?;
    }
    for c in &lp.constraints {
        check_name(&c.name)?;
    }
    let obj = objective_row_name(lp);

    // Column-major view of the rows, zero entries dropped.
    let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); lp.num_vars()];
    for (i, c) in lp.constraints.iter().enumerate() {
        for &(v, a) in &c.terms {
            if a != 0.0 {
                cols[v.0].push((i, a));
            }
        }
    }

    let title: String = lp.name.split_whitespace().collect::<Vec<_>>().join("_");
    writeln!(out, "NAME {title}")?;
    writeln!(out, "ROWS")?;
    writeln!(out, " N  {obj}")?;
    for c in &lp.constraints {
        let tag = match c.sense {
            Sense::Le => 'L',
            Sense::Ge => 'G',
            Sense::Eq => 'E',
        };
        writeln!(out, " {tag}  {}", c.name)?;
    }
    writeln!(out, "COLUMNS")?;
    for (j, v) in lp.variables.iter().enumerate() {
        let mut col = cols[j].clone();
        col.sort_by_key(|e| e.0);
        if v.cost != 0.0 || col.is_empty() {
            writeln!(out, "    {}  {obj}  {:?}", v.name, v.cost)?;
        }
        for (i, a) in col {
            writeln!(out, "    {}  {}  {:?}", v.name, lp.constraints[i].name, a)?;
        }
    }
    writeln!(out, "RHS")?;
    if lp.objective_offset != 0.0 {
        writeln!(out, "    RHS  {obj}  {:?}", -lp.objective_offset)?;
    }
    for c in &lp.constraints {
        if c.rhs != 0.0 {
            writeln!(out, "    RHS  {}  {:?}", c.name, c.rhs)?;
        }
    }
    writeln!(out, "BOUNDS")?;
    for v in &lp.variables {
        let (l, u) = (v.lower, v.upper);
        if l == 0.0 && u == f64::INFINITY {
            continue;
        }
        if l == u {
            writeln!(out, " FX BND  {}  {:?}", v.name, l)?;
            continue;
        }
        if l == f64::NEG_INFINITY && u == f64::INFINITY {
            writeln!(out, " FR BND  {}", v.name)?;
            continue;
        }
        if l == f64::NEG_INFINITY {
            writeln!(out, " MI BND  {}", v.name)?;
        } else if l != 0.0 {
            writeln!(out, " LO BND  {}  {:?}", v.name, l)?;
        }
        if u != f64::INFINITY {
            writeln!(out, " UP BND  {}  {:?}", v.name, u)?;
        }
    }
    writeln!(out, "ENDATA")?;
    Ok(())
}

#[derive(PartialEq)]
enum Section {
    None,
    Rows,
    Columns,
    Rhs,
    Bounds,
}

fn number(tok: &str, line: usize) -> Result<f64, LpError> {
    let v: f64 = tok.parse().map_err(|_| LpError::Parse { line, msg: format!("expected a number, found `{tok}`") })?;
    if v.is_nan() {
        return Err(LpError::Parse { line, msg: "NaN is not allowed".into() });
    }
    Ok(v)
}

pub fn parse(bytes: &[u8]) -> Result<LinearProgram, LpError> {
    let text = std::str::from_utf8(bytes).map_err(|e| LpError::Parse { line: 0, msg: format!("not UTF-8: {e}") })?;
    let mut lp = LinearProgram::new("");
    let mut section = Section::None;
    let mut obj_name: Option<String> = None;
    let mut row_of: HashMap<String, usize> = HashMap::new();
    let mut col_of: HashMap<String, usize> = HashMap::new();
    let mut saw_end = false;

    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        if raw.trim().is_empty() || raw.starts_with('*') {
            continue;
        }
        let toks: Vec<&str> = raw.split_whitespace().collect();
        if !raw.starts_with(' ') && !raw.starts_with('\t') {
            match toks[0] {
                "NAME" => lp.name = toks[1..].join(" "),
                "ROWS" => section = Section::Rows,
                "COLUMNS" => section = Section::Columns,
                "RHS" => section = Section::Rhs,
                "BOUNDS" => section = Section::Bounds,
                "ENDATA" => {
                    saw_end = true;
                    break;
                }
                other => return Err(LpError::Parse { line, msg: format!("unsupported section `{other}`") }),
            }
            continue;
        }
        let bad = |msg: &str| LpError::Parse { line, msg: msg.to_string() };
        match section {
            Section::None => return Err(bad("data before first section")),
            Section::Rows => {
                if toks.len() != 2 {
                    return Err(bad("expected `<type> <name>`"));
                }
                let sense = match toks[0] {
                    "N" => {
                        if obj_name.is_none() {
                            obj_name = Some(toks[1].to_string());
                        }
                        continue;
                    }
                    "L" => Sense::Le,
                    "G" => Sense::Ge,
                    "E" => Sense::Eq,
                    _ => return Err(bad("row type must be N, L, G or E")),
                };
                if row_of.insert(toks[1].to_string(), lp.constraints.len()).is_some() {
                    return Err(LpError::DuplicateName(toks[1].to_string()));
                }
                lp.add_row(toks[1], Vec::new(), sense, 0.0);
            }
            Section::Columns => {
                if toks.len() < 3 || toks.len() % 2 == 0 {
                    return Err(bad("expected `<column> <row> <value> [<row> <value>]`"));
                }
                if toks.contains(&"'MARKER'") {
                    return Err(bad("integer markers are not supported"));
                }
                let j = *col_of
                    .entry(toks[0].to_string())
                    .or_insert_with(|| lp.add_var(toks[0], 0.0, f64::INFINITY, 0.0).0);
                for pair in toks[1..].chunks(2) {
                    let a = number(pair[1], line)?;
                    if Some(pair[0]) == obj_name.as_deref() {
                        lp.variables[j].cost = a;
                    } else if let Some(&i) = row_of.get(pair[0]) {
                        if a != 0.0 {
                            lp.constraints[i].terms.push((VarId(j), a));
                        }
                    } else {
                        return Err(bad(&format!("unknown row `{}`", pair[0])));
                    }
                }
            }
            Section::Rhs => {
                let rest = if toks.len() % 2 == 1 { &toks[1..] } else { &toks[..] };
                for pair in rest.chunks(2) {
                    if pair.len() != 2 {
                        return Err(bad("expected `<row> <value>` pairs"));
                    }
                    let b = number(pair[1], line)?;
                    if Some(pair[0]) == obj_name.as_deref() {
                        lp.objective_offset = -b;
                    } else if let Some(&i) = row_of.get(pair[0]) {
                        lp.constraints[i].rhs = b;
                    } else {
                        return Err(bad(&format!("unknown row `{}`", pair[0])));
                    }
                }
            }
            Section::Bounds => {
                if toks.len() < 3 {
                    return Err(bad("expected `<type> <set> <column> [value]`"));
                }
                let j = *col_of.get(toks[2]).ok_or_else(|| bad(&format!("unknown column `{}`", toks[2])))?;
                let v = &mut lp.variables[j];
                let val = || toks.get(3).ok_or_else(|| bad("missing bound value")).and_then(|t| number(t, line));
                match toks[0] {
                    "UP" => v.upper = val()?,
                    "LO" => v.lower = val()?,
                    "FX" => {
                        let x = val()?;
                        v.lower = x;
                        v.upper = x;
                    }
                    "FR" => {
                        v.lower = f64::NEG_INFINITY;
                        v.upper = f64::INFINITY;
                    }
                    "MI" => v.lower = f64::NEG_INFINITY,
                    "PL" => v.upper = f64::INFINITY,
                    other => return Err(bad(&format!("unsupported bound type `{other}`"))),
                }
            }
        }
    }
    if !saw_end {
        return Err(LpError::Parse { line: text.lines().count(), msg: "missing ENDATA".into() });
    }
    lp.validate()?;
    Ok(lp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_bounds_and_offset() {
        let mut lp = LinearProgram::new("demo");
        let x = lp.add_var("x[0,1]", -1.0, 4.0, 2.0);
        let y = lp.add_var("y", f64::NEG_INFINITY, f64::INFINITY, 0.0);
        lp.add_row("c", vec![(x, 1.0), (y, 0.0)], Sense::Ge, 3.0);
        lp.objective_offset = 7.5;
        let mut out = Vec::new();
        write(&lp, &mut out).unwrap();
        let text = String::from_utf8(out.clone()).unwrap();
        assert!(text.contains(" LO BND  x[0,1]  -1.0"));
        assert!(text.contains(" FR BND  y"));
        assert!(text.contains("RHS  obj  -7.5"));
        let back = parse(&out).unwrap();
        assert_eq!(back.objective_offset, 7.5);
        assert_eq!(back.constraints[0].terms, vec![(x, 1.0)]);
        assert_eq!(back.variables, lp.variables);
    }

    #[test]
    fn rejects_whitespace_names() {
        let mut lp = LinearProgram::new("t");
        lp.add_var("bad name", 0.0, 1.0, 0.0);
        match write(&lp, &mut Vec::new()) {
            Err(LpError::InvalidName { name, .. }) => assert_eq!(name, "bad name"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
