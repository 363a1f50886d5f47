//! CPLEX-style LP text format.
//!
//! Names may contain brackets and commas (`power_balance[0,12]`), which
//! Gurobi and HiGHS accept. Characters that the format uses as operators
//! are rejected at write time. Every column is listed in the objective,
//! zero costs included, so the column order survives a round trip.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::Write;

use super::mps::check_name;
use super::{LinearProgram, LpError, Sense, VarId};

const TERMS_PER_LINE: usize = 8;

fn check_lp_name(name: &str) -> Result<(), LpError> {
    check_name(name)?;
    let first = name.chars().next().unwrap_or(' ');
    if first.is_ascii_digit() || first == '.' {
        return Err(LpError::InvalidName { name: name.into(), reason: "starts with a digit or period" });
    }
    if name.chars().any(|c| matches!(c, '+' | '-' | '*' | '^' | '<' | '>' | '=' | ':' | '\\')) {
        return Err(LpError::InvalidName { name: name.into(), reason: "contains an operator character" });
    }
    let lower = name.to_ascii_lowercase();
    if matches!(lower.as_str(), "inf" | "infinity" | "free") {
        return Err(LpError::InvalidName { name: name.into(), reason: "reserved word" });
    }
    Ok(())
}

fn fmt_num(v: f64) -> String {
    if v == f64::INFINITY {
        "+inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v:?}")
    }
}

fn push_terms(buf: &mut String, terms: impl Iterator<Item = (f64, String)>) {
    let mut n = 0;
    for (a, name) in terms {
        if n > 0 && n % TERMS_PER_LINE == 0 {
            buf.push_str("\n   ");
        }
        let sign = if a.is_sign_negative() { '-' } else { '+' };
        let _ = write!(buf, " {sign} {:?} {name}", a.abs());
        n += 1;
    }
}

pub fn write<W: Write>(lp: &LinearProgram, out: &mut W) -> Result<(), LpError> {
    lp.validate()?;
    for v in &lp.variables {
        check_lp_name(&v.name)?;
    }
    for c in &lp.constraints {
        check_lp_name(&c.name)?;
    }
    if lp.variables.is_empty() && !lp.constraints.is_empty() {
        return Err(LpError::Parse { line: 0, msg: "rows without columns cannot be written".into() });
    }
    let mut buf = String::new();
    let title: String = lp.name.split_whitespace().collect::<Vec<_>>().join("_");
    let _ = writeln!(buf, "\\ Problem name: {title}");
    buf.push_str("Minimize\n obj:");
    push_terms(&mut buf, lp.variables.iter().map(|v| (v.cost, v.name.clone())));
    if lp.objective_offset != 0.0 {
        let sign = if lp.objective_offset < 0.0 { '-' } else { '+' };
        let _ = write!(buf, " {sign} {:?}", lp.objective_offset.abs());
    }
    buf.push_str("\nSubject To\n");
    for c in &lp.constraints {
        let _ = write!(buf, " {}:", c.name);
        let terms: Vec<_> = c.terms.iter().filter(|t| t.1 != 0.0).collect();
        if terms.is_empty() {
            let _ = write!(buf, " + 0 {}", lp.variables[0].name);
        } else {
            push_terms(&mut buf, terms.iter().map(|&&(v, a)| (a, lp.variables[v.0].name.clone())));
        }
        let _ = writeln!(buf, " {} {}", c.sense, fmt_num(c.rhs));
    }
    buf.push_str("Bounds\n");
    for v in &lp.variables {
        let (l, u) = (v.lower, v.upper);
        if l == 0.0 && u == f64::INFINITY {
            continue;
        }
        if l == f64::NEG_INFINITY && u == f64::INFINITY {
            let _ = writeln!(buf, " {} free", v.name);
        } else if l == u {
            let _ = writeln!(buf, " {} = {}", v.name, fmt_num(l));
        } else {
            let _ = writeln!(buf, " {} <= {} <= {}", fmt_num(l), v.name, fmt_num(u));
        }
    }
    buf.push_str("End\n");
    out.write_all(buf.as_bytes())?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Word(String),
    Sign(f64),
    Cmp(Sense),
    Colon,
}

fn tokenize(s: &str, line: usize) -> Result<Vec<Tok>, LpError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '+' || c == '-' {
            out.push(Tok::Sign(if c == '-' { -1.0 } else { 1.0 }));
            i += 1;
        } else if c == ':' {
            out.push(Tok::Colon);
            i += 1;
        } else if c == '<' || c == '>' || c == '=' {
            let mut j = i + 1;
            while j < chars.len() && matches!(chars[j], '<' | '>' | '=') {
                j += 1;
            }
            let op: String = chars[i..j].iter().collect();
            let sense = match op.as_str() {
                "<=" | "=<" | "<" => Sense::Le,
                ">=" | "=>" | ">" => Sense::Ge,
                "=" => Sense::Eq,
                _ => return Err(LpError::Parse { line, msg: format!("bad operator `{op}`") }),
            };
            out.push(Tok::Cmp(sense));
            i = j;
        } else if c.is_ascii_digit() || c == '.' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_digit() || chars[j] == '.') {
                j += 1;
            }
            if j < chars.len() && (chars[j] == 'e' || chars[j] == 'E') {
                let mut k = j + 1;
                if k < chars.len() && (chars[k] == '+' || chars[k] == '-') {
                    k += 1;
                }
                if k < chars.len() && chars[k].is_ascii_digit() {
                    while k < chars.len() && chars[k].is_ascii_digit() {
                        k += 1;
                    }
                    j = k;
                }
            }
            let t: String = chars[i..j].iter().collect();
            let v = t.parse().map_err(|_| LpError::Parse { line, msg: format!("bad number `{t}`") })?;
            out.push(Tok::Num(v));
            i = j;
        } else {
            let mut j = i;
            while j < chars.len() && !chars[j].is_whitespace() && !matches!(chars[j], '+' | '-' | ':' | '<' | '>' | '=')
            {
                j += 1;
            }
            let w: String = chars[i..j].iter().collect();
            match w.to_ascii_lowercase().as_str() {
                "inf" | "infinity" => out.push(Tok::Num(f64::INFINITY)),
                _ => out.push(Tok::Word(w)),
            }
            i = j;
        }
    }
    Ok(out)
}

struct Builder {
    lp: LinearProgram,
    cols: HashMap<String, usize>,
}

impl Builder {
    fn col(&mut self, name: &str) -> usize {
        if let Some(&j) = self.cols.get(name) {
            return j;
        }
        let j = self.lp.add_var(name, 0.0, f64::INFINITY, 0.0).0;
        self.cols.insert(name.to_string(), j);
        j
    }

    /// Parses `[name:] terms` and returns (name, linear terms, constant, rest).
    fn linear<'a>(
        &mut self,
        toks: &'a [Tok],
        line: usize,
    ) -> Result<(Option<String>, Vec<(usize, f64)>, f64, &'a [Tok]), LpError> {
        let mut i = 0;
        let mut name = None;
        if let (Some(Tok::Word(w)), Some(Tok::Colon)) = (toks.first(), toks.get(1)) {
            name = Some(w.clone());
            i = 2;
        }
        let mut terms = Vec::new();
        let mut constant = 0.0;
        while i < toks.len() {
            let mut sign = 1.0;
            let mut any = false;
            while let Some(Tok::Sign(s)) = toks.get(i) {
                sign *= s;
                i += 1;
                any = true;
            }
            let mut coef = None;
            if let Some(Tok::Num(v)) = toks.get(i) {
                coef = Some(*v);
                i += 1;
            }
            match toks.get(i) {
                Some(Tok::Word(w)) => {
                    let j = self.col(w);
                    terms.push((j, sign * coef.unwrap_or(1.0)));
                    i += 1;
                }
                _ => {
                    if let Some(v) = coef {
                        constant += sign * v;
                    } else if any {
                        return Err(LpError::Parse { line, msg: "dangling sign".into() });
                    }
                    break;
                }
            }
        }
        Ok((name, terms, constant, &toks[i..]))
    }
}

#[derive(PartialEq, Clone, Copy)]
enum Section {
    Head,
    Objective,
    Constraints,
    Bounds,
}

fn signed_number(toks: &[Tok], line: usize) -> Result<(f64, usize), LpError> {
    let mut sign = 1.0;
    let mut i = 0;
    while let Some(Tok::Sign(s)) = toks.get(i) {
        sign *= s;
        i += 1;
    }
    match toks.get(i) {
        Some(Tok::Num(v)) => Ok((sign * v, i + 1)),
        _ => Err(LpError::Parse { line, msg: "expected a number".into() }),
    }
}

pub fn parse(bytes: &[u8]) -> Result<LinearProgram, LpError> {
    let text = std::str::from_utf8(bytes).map_err(|e| LpError::Parse { line: 0, msg: format!("not UTF-8: {e}") })?;
    let mut b = Builder { lp: LinearProgram::new(""), cols: HashMap::new() };
    let mut section = Section::Head;
    // Statements may span lines: buffer tokens until the statement is complete.
    let mut pending: Vec<Tok> = Vec::new();
    let mut pending_line = 0;
    let mut objective: Vec<Tok> = Vec::new();
    let mut bounds: Vec<(usize, Vec<Tok>)> = Vec::new();
    let mut saw_end = false;

    let flush_row = |b: &mut Builder, toks: &[Tok], line: usize| -> Result<(), LpError> {
        let (name, terms, constant, rest) = b.linear(toks, line)?;
        let name = name.ok_or(LpError::Parse { line, msg: "constraint without a name".into() })?;
        let sense = match rest.first() {
            Some(Tok::Cmp(s)) => *s,
            _ => return Err(LpError::Parse { line, msg: format!("constraint `{name}` lacks a comparison") }),
        };
        let (rhs, used) = signed_number(&rest[1..], line)?;
        if used + 1 != rest.len() {
            return Err(LpError::Parse { line, msg: format!("trailing tokens in `{name}`") });
        }
        let terms = terms.into_iter().filter(|t| t.1 != 0.0).map(|(j, a)| (VarId(j), a)).collect();
        b.lp.add_row(name, terms, sense, rhs - constant);
        Ok(())
    };

    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let (content, comment) = match raw.find('\\') {
            Some(p) => (&raw[..p], Some(&raw[p + 1..])),
            None => (raw, None),
        };
        if let Some(c) = comment {
            if let Some(n) = c.trim().strip_prefix("Problem name:") {
                b.lp.name = n.trim().to_string();
            }
        }
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        let lower = trimmed.to_ascii_lowercase();
        let header = match lower.as_str() {
            "minimize" | "minimum" | "min" => Some(Section::Objective),
            "maximize" | "maximum" | "max" => {
                return Err(LpError::Parse { line, msg: "maximization is not supported".into() })
            }
            "subject to" | "such that" | "st" | "s.t." => Some(Section::Constraints),
            "bounds" | "bound" => Some(Section::Bounds),
            "end" => {
                saw_end = true;
                None
            }
            "generals" | "general" | "integers" | "binary" | "binaries" => {
                return Err(LpError::Parse { line, msg: "integer sections are not supported".into() })
            }
            _ => None,
        };
        if header.is_some() || saw_end {
            if section == Section::Constraints && !pending.is_empty() {
                return Err(LpError::Parse { line: pending_line, msg: "unterminated constraint".into() });
            }
            if let Some(h) = header {
                section = h;
            }
            if saw_end {
                break;
            }
            continue;
        }
        let toks = tokenize(trimmed, line)?;
        match section {
            Section::Head => return Err(LpError::Parse { line, msg: "expected `Minimize`".into() }),
            Section::Objective => objective.extend(toks),
            Section::Constraints => {
                if pending.is_empty() {
                    pending_line = line;
                }
                pending.extend(toks);
                // Complete once a comparison is followed by a number.
                if let Some(p) = pending.iter().position(|t| matches!(t, Tok::Cmp(_))) {
                    if pending[p + 1..].iter().any(|t| matches!(t, Tok::Num(_))) {
                        let stmt = std::mem::take(&mut pending);
                        flush_row(&mut b, &stmt, pending_line)?;
                    }
                }
            }
            Section::Bounds => bounds.push((line, toks)),
        }
    }
    if !saw_end {
        return Err(LpError::Parse { line: text.lines().count(), msg: "missing `End`".into() });
    }

    // The objective is parsed before rows are materialized so that its column
    // order defines the variable order. Rows were already parsed, so rebuild:
    // re-run with the objective first.
    let mut ordered = Builder { lp: LinearProgram::new(b.lp.name.clone()), cols: HashMap::new() };
    let (_, terms, constant, rest) = ordered.linear(&objective, 0)?;
    if !rest.is_empty() {
        return Err(LpError::Parse { line: 0, msg: "unexpected tokens in objective".into() });
    }
    for (j, a) in terms {
        ordered.lp.variables[j].cost += a;
    }
    ordered.lp.objective_offset = constant;
    for c in &b.lp.constraints {
        let terms = c.terms.iter().map(|&(v, a)| (VarId(ordered.col(&b.lp.variables[v.0].name)), a)).collect();
        ordered.lp.add_row(c.name.clone(), terms, c.sense, c.rhs);
    }

    for (line, toks) in bounds {
        apply_bound(&mut ordered, &toks, line)?;
    }
    ordered.lp.validate()?;
    Ok(ordered.lp)
}

fn apply_bound(b: &mut Builder, toks: &[Tok], line: usize) -> Result<(), LpError> {
    let bad = || LpError::Parse { line, msg: "unrecognized bound".into() };
    // `x free`
    if let [Tok::Word(x), Tok::Word(f)] = toks {
        if f.eq_ignore_ascii_case("free") {
            let j = b.col(x);
            b.lp.variables[j].lower = f64::NEG_INFINITY;
            b.lp.variables[j].upper = f64::INFINITY;
            return Ok(());
        }
        return Err(bad());
    }
    // `l <= x <= u`
    if let Ok((l, used)) = signed_number(toks, line) {
        let rest = &toks[used..];
        if let [Tok::Cmp(s1), Tok::Word(x), tail @ ..] = rest {
            let j = b.col(x);
            let v = &mut b.lp.variables[j];
            match s1 {
                Sense::Le => v.lower = l,
                Sense::Ge => v.upper = l,
                Sense::Eq => {
                    v.lower = l;
                    v.upper = l;
                }
            }
            if !tail.is_empty() {
                let Tok::Cmp(s2) = &tail[0] else { return Err(bad()) };
                let (u, used2) = signed_number(&tail[1..], line)?;
                if used2 + 1 != tail.len() {
                    return Err(bad());
                }
                match s2 {
                    Sense::Le => v.upper = u,
                    Sense::Ge => v.lower = u,
                    Sense::Eq => return Err(bad()),
                }
            }
            return Ok(());
        }
        return Err(bad());
    }
    // `x <= u`, `x >= l`, `x = v`
    if let [Tok::Word(x), Tok::Cmp(s), tail @ ..] = toks {
        let (val, used) = signed_number(tail, line)?;
        if used != tail.len() {
            return Err(bad());
        }
        let j = b.col(x);
        let v = &mut b.lp.variables[j];
        match s {
            Sense::Le => v.upper = val,
            Sense::Ge => v.lower = val,
            Sense::Eq => {
                v.lower = val;
                v.upper = val;
            }
        }
        return Ok(());
    }
    Err(bad())
}
