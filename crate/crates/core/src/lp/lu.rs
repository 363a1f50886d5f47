//! Sparse LU factorization of a simplex basis.
//!
//! Left-looking factorization: each basis column is solved against the
//! part of `L` built so far (sparse triangular solve driven by a depth-first
//! reach), then a pivot row is picked by threshold partial pivoting with a
//! preference for rows with few nonzeros. Columns are processed in order of
//! increasing count so that logical (unit) columns pivot first.

/// Columns of the basis matrix in compressed form, one per basis position.
#[derive(Debug, Default, Clone)]
pub(crate) struct BasisColumns {
    pub start: Vec<usize>,
    pub rows: Vec<usize>,
    pub vals: Vec<f64>,
}

impl BasisColumns {
    pub fn with_capacity(m: usize, nnz: usize) -> Self {
        let mut start = Vec::with_capacity(m + 1);
        start.push(0);
        Self { start, rows: Vec::with_capacity(nnz), vals: Vec::with_capacity(nnz) }
    }

    pub fn push_entry(&mut self, row: usize, val: f64) {
        self.rows.push(row);
        self.vals.push(val);
    }

    pub fn finish_column(&mut self) {
        self.start.push(self.rows.len());
    }

    fn num_cols(&self) -> usize {
        self.start.len() - 1
    }

    fn col(&self, k: usize) -> (&[usize], &[f64]) {
        let (a, b) = (self.start[k], self.start[k + 1]);
        (&self.rows[a..b], &self.vals[a..b])
    }
}

/// Basis positions that could not be pivoted, and the rows left without a pivot.
#[derive(Debug, Clone)]
pub(crate) struct Singular {
    pub positions: Vec<usize>,
    pub free_rows: Vec<usize>,
}

const PIVOT_THRESHOLD: f64 = 0.1;
const SINGULAR_TOL: f64 = 1e-11;
const NONE: usize = usize::MAX;

#[derive(Debug, Clone)]
pub(crate) struct LuFactors {
    m: usize,
    // L by step: entries (original row, multiplier), unit diagonal omitted.
    l_start: Vec<usize>,
    l_rows: Vec<usize>,
    l_vals: Vec<f64>,
    // U by step: entries (earlier step, value), diagonal kept separately.
    u_start: Vec<usize>,
    u_steps: Vec<usize>,
    u_vals: Vec<f64>,
    u_diag: Vec<f64>,
    row_of_step: Vec<usize>,
    col_of_step: Vec<usize>,
    // Row-wise copies for scatter-form btran: U by row (later step, value)
    // and L by the step of each entry's row (owning step, multiplier).
    ut_start: Vec<usize>,
    ut_steps: Vec<usize>,
    ut_vals: Vec<f64>,
    lt_start: Vec<usize>,
    lt_steps: Vec<usize>,
    lt_vals: Vec<f64>,
    work: Vec<f64>,
}

/// Transposes a step-indexed sparse structure whose entries name another step.
fn transpose(m: usize, start: &[usize], idx: &[usize], vals: &[f64]) -> (Vec<usize>, Vec<usize>, Vec<f64>) {
    let mut t_start = vec![0usize; m + 1];
    for &i in idx {
        t_start[i + 1] += 1;
    }
    for k in 0..m {
        t_start[k + 1] += t_start[k];
    }
    let mut fill = t_start.clone();
    let mut t_idx = vec![0usize; idx.len()];
    let mut t_vals = vec![0.0; idx.len()];
    for k in 0..m {
        for p in start[k]..start[k + 1] {
            let q = fill[idx[p]];
            fill[idx[p]] += 1;
            t_idx[q] = k;
            t_vals[q] = vals[p];
        }
    }
    (t_start, t_idx, t_vals)
}

impl LuFactors {
    pub fn factorize(cols: &BasisColumns) -> Result<Self, Singular> {
        let m = cols.num_cols();
        let mut row_count = vec![0usize; m];
        for &r in &cols.rows {
            row_count[r] += 1;
        }
        let mut order: Vec<usize> = (0..m).collect();
        order.sort_by_key(|&k| cols.start[k + 1] - cols.start[k]);

        let mut lu = LuFactors {
            m,
            l_start: Vec::with_capacity(m + 1),
            l_rows: Vec::with_capacity(cols.rows.len()),
            l_vals: Vec::with_capacity(cols.rows.len()),
            u_start: Vec::with_capacity(m + 1),
            u_steps: Vec::with_capacity(cols.rows.len()),
            u_vals: Vec::with_capacity(cols.rows.len()),
            u_diag: Vec::with_capacity(m),
            row_of_step: Vec::with_capacity(m),
            col_of_step: Vec::with_capacity(m),
            ut_start: Vec::new(),
            ut_steps: Vec::new(),
            ut_vals: Vec::new(),
            lt_start: Vec::new(),
            lt_steps: Vec::new(),
            lt_vals: Vec::new(),
            work: vec![0.0; m],
        };
        lu.l_start.push(0);
        lu.u_start.push(0);

        let mut step_of_row = vec![NONE; m];
        let mut x = vec![0.0; m];
        let mut mark = vec![NONE; m];
        let mut reach: Vec<usize> = Vec::with_capacity(m);
        let mut stack: Vec<(usize, usize)> = Vec::new();
        let mut deficient = Vec::new();

        for (pass, &k) in order.iter().enumerate() {
            let (rows, vals) = cols.col(k);

            // Topological order of rows reachable from the column pattern through L.
            reach.clear();
            for &r0 in rows {
                if mark[r0] == pass {
                    continue;
                }
                mark[r0] = pass;
                stack.push((r0, 0));
                while let Some(&mut (r, ref mut next)) = stack.last_mut() {
                    let s = step_of_row[r];
                    let mut pushed = false;
                    if s != NONE {
                        let (a, b) = (lu.l_start[s], lu.l_start[s + 1]);
                        while a + *next < b {
                            let child = lu.l_rows[a + *next];
                            *next += 1;
                            if mark[child] != pass {
                                mark[child] = pass;
                                stack.push((child, 0));
                                pushed = true;
                                break;
                            }
                        }
                    }
                    if !pushed {
                        stack.pop();
                        reach.push(r);
                    }
                }
            }
            // `reach` is in reverse topological order.
            for (&r, &v) in rows.iter().zip(vals) {
                x[r] = v;
            }
            for &r in reach.iter().rev() {
                let s = step_of_row[r];
                if s == NONE {
                    continue;
                }
                let xr = x[r];
                if xr == 0.0 {
                    continue;
                }
                for p in lu.l_start[s]..lu.l_start[s + 1] {
                    x[lu.l_rows[p]] -= lu.l_vals[p] * xr;
                }
            }

            let mut max_abs = 0.0f64;
            for &r in &reach {
                if step_of_row[r] == NONE {
                    max_abs = max_abs.max(x[r].abs());
                }
            }
            let mut pivot_row = NONE;
            if max_abs > SINGULAR_TOL {
                let mut best = (usize::MAX, 0.0f64);
                for &r in &reach {
                    if step_of_row[r] != NONE {
                        continue;
                    }
                    let a = x[r].abs();
                    if a >= PIVOT_THRESHOLD * max_abs {
                        let cnt = row_count[r];
                        if cnt < best.0 || (cnt == best.0 && a > best.1) {
                            best = (cnt, a);
                            pivot_row = r;
                        }
                    }
                }
            }

            if pivot_row == NONE {
                deficient.push(k);
                for &r in &reach {
                    x[r] = 0.0;
                }
                continue;
            }

            let step = lu.row_of_step.len();
            let piv = x[pivot_row];
            for &r in reach.iter().rev() {
                let v = x[r];
                x[r] = 0.0;
                if r == pivot_row || v == 0.0 {
                    continue;
                }
                let s = step_of_row[r];
                if s != NONE {
                    lu.u_steps.push(s);
                    lu.u_vals.push(v);
                } else {
                    lu.l_rows.push(r);
                    lu.l_vals.push(v / piv);
                }
            }
            lu.u_diag.push(piv);
            lu.u_start.push(lu.u_steps.len());
            lu.l_start.push(lu.l_rows.len());
            lu.row_of_step.push(pivot_row);
            lu.col_of_step.push(k);
            step_of_row[pivot_row] = step;
        }

        if !deficient.is_empty() {
            let free_rows = (0..m).filter(|&r| step_of_row[r] == NONE).collect();
            return Err(Singular { positions: deficient, free_rows });
        }
        (lu.ut_start, lu.ut_steps, lu.ut_vals) = transpose(m, &lu.u_start, &lu.u_steps, &lu.u_vals);
        let l_steps: Vec<usize> = lu.l_rows.iter().map(|&r| step_of_row[r]).collect();
        (lu.lt_start, lu.lt_steps, lu.lt_vals) = transpose(m, &lu.l_start, &l_steps, &lu.l_vals);
        Ok(lu)
    }

    /// Solves `B x = b` in place: `rhs` is indexed by row on entry and by
    /// basis position on exit.
    pub fn ftran(&mut self, rhs: &mut [f64]) {
        let m = self.m;
        for k in 0..m {
            let v = rhs[self.row_of_step[k]];
            if v != 0.0 {
                for p in self.l_start[k]..self.l_start[k + 1] {
                    rhs[self.l_rows[p]] -= self.l_vals[p] * v;
                }
            }
        }
        let w = &mut self.work;
        for k in 0..m {
            w[k] = rhs[self.row_of_step[k]];
        }
        for k in (0..m).rev() {
            let wk = w[k] / self.u_diag[k];
            w[k] = wk;
            if wk != 0.0 {
                for p in self.u_start[k]..self.u_start[k + 1] {
                    w[self.u_steps[p]] -= self.u_vals[p] * wk;
                }
            }
        }
        for k in 0..m {
            rhs[self.col_of_step[k]] = w[k];
        }
    }

    /// Solves `B^T y = c` in place: `rhs` is indexed by basis position on
    /// entry and by row on exit.
    pub fn btran(&mut self, rhs: &mut [f64]) {
        let m = self.m;
        let v = &mut self.work;
        for k in 0..m {
            v[k] = rhs[self.col_of_step[k]];
        }
        for k in 0..m {
            let vk = v[k] / self.u_diag[k];
            v[k] = vk;
            if vk != 0.0 {
                for p in self.ut_start[k]..self.ut_start[k + 1] {
                    v[self.ut_steps[p]] -= self.ut_vals[p] * vk;
                }
            }
        }
        for k in (0..m).rev() {
            let vk = v[k];
            if vk != 0.0 {
                for p in self.lt_start[k]..self.lt_start[k + 1] {
                    v[self.lt_steps[p]] -= self.lt_vals[p] * vk;
                }
            }
        }
        for k in 0..m {
            rhs[self.row_of_step[k]] = v[k];
        }
    }

    pub fn nnz(&self) -> usize {
        self.l_rows.len() + self.u_steps.len() + self.m
    }
}
