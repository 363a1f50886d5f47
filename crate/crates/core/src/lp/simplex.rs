//! Bounded-variable revised primal simplex.
//!
//! Every row `a.x (sense) b` gets a logical variable `r = a.x` whose bounds
//! encode the sense, so the working system is `A x - r = 0` with all
//! restrictions carried as column bounds. The initial basis is the logical
//! one. Infeasible starts are handled by a composite phase 1 that minimizes
//! the sum of bound violations of basic variables, then phase 2 prices with
//! the true costs. Pricing uses devex reference weights with a fallback to
//! Bland's rule after a run of degenerate pivots; the ratio test is Harris'
//! two-pass test. Reduced costs are updated from the pivot row each
//! iteration and recomputed from scratch after refactorization or whenever
//! the phase costs of the basis change.
//! The basis inverse is kept as a sparse LU factorization plus a product-form
//! eta file, refactorized periodically.

use super::lu::{BasisColumns, LuFactors};
use super::scaling;
use super::solution::{Solution, SolveOptions, Status};
use super::{LinearProgram, LpError, Sense};

const NONE: usize = usize::MAX;
const PIVOT_TOL: f64 = 1e-9;
const REFACTOR_EVERY: usize = 64;
const DEGENERATE_RUN_FOR_BLAND: usize = 50;
/// Devex weights are reset to 1 once any grows past this.
const DEVEX_RESET: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NonBasic {
    Lower,
    Upper,
    /// Free variable parked at zero.
    Zero,
}

struct Eta {
    pos: usize,
    pivot: f64,
    idx: Vec<usize>,
    val: Vec<f64>,
}

struct Simplex {
    m: usize,
    n: usize,
    col_start: Vec<usize>,
    row_idx: Vec<usize>,
    vals: Vec<f64>,
    // A by row, for the pivot row.
    row_start: Vec<usize>,
    row_col: Vec<usize>,
    row_val: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    cost: Vec<f64>,
    x: Vec<f64>,
    pos_of: Vec<usize>,
    nb_state: Vec<NonBasic>,
    basis: Vec<usize>,
    lu: Option<LuFactors>,
    etas: Vec<Eta>,
    eta_nnz: usize,
    feas_tol: f64,
    opt_tol: f64,
    iterations: usize,
    /// Devex reference weights, one per column (logicals included).
    weights: Vec<f64>,
    /// Reduced costs of nonbasic columns under the current phase costs.
    d: Vec<f64>,
    /// Phase costs by basis position that `d` was computed with.
    cb: Vec<f64>,
    phase1: bool,
    stale: bool,
    // scratch
    y: Vec<f64>,
    alpha: Vec<f64>,
    cb_new: Vec<f64>,
    rho: Vec<f64>,
    alpha_r: Vec<f64>,
    touched: Vec<usize>,
    mark: Vec<bool>,
}

#[derive(PartialEq)]
enum Pricing {
    Devex,
    Bland,
}

impl Simplex {
    fn total(&self) -> usize {
        self.n + self.m
    }

    fn for_column(&self, j: usize, mut f: impl FnMut(usize, f64)) {
        if j < self.n {
            for p in self.col_start[j]..self.col_start[j + 1] {
                f(self.row_idx[p], self.vals[p]);
            }
        } else {
            f(j - self.n, -1.0);
        }
    }

    fn dot_y(&self, j: usize) -> f64 {
        if j < self.n {
            let mut s = 0.0;
            for p in self.col_start[j]..self.col_start[j + 1] {
                s += self.y[self.row_idx[p]] * self.vals[p];
            }
            s
        } else {
            -self.y[j - self.n]
        }
    }

    fn refactor(&mut self) {
        loop {
            let mut cols = BasisColumns::with_capacity(self.m, self.m * 2);
            for &j in &self.basis {
                self.for_column(j, |i, a| cols.push_entry(i, a));
                cols.finish_column();
            }
            match LuFactors::factorize(&cols) {
                Ok(lu) => {
                    self.lu = Some(lu);
                    self.etas.clear();
                    self.eta_nnz = 0;
                    break;
                }
                Err(sing) => {
                    // Swap deficient columns for logicals of uncovered rows.
                    for (&p, &row) in sing.positions.iter().zip(&sing.free_rows) {
                        let out = self.basis[p];
                        self.make_nonbasic_at_nearest(out);
                        let logical = self.n + row;
                        self.basis[p] = logical;
                        self.pos_of[logical] = p;
                    }
                }
            }
        }
        self.recompute_basics();
        self.stale = true;
    }

    fn make_nonbasic_at_nearest(&mut self, j: usize) {
        self.pos_of[j] = NONE;
        let (l, u, v) = (self.lower[j], self.upper[j], self.x[j]);
        let state = if l.is_finite() && u.is_finite() {
            if (v - l).abs() <= (u - v).abs() {
                NonBasic::Lower
            } else {
                NonBasic::Upper
            }
        } else if l.is_finite() {
            NonBasic::Lower
        } else if u.is_finite() {
            NonBasic::Upper
        } else {
            NonBasic::Zero
        };
        self.set_nonbasic(j, state);
    }

    fn set_nonbasic(&mut self, j: usize, state: NonBasic) {
        self.nb_state[j] = state;
        self.x[j] = match state {
            NonBasic::Lower => self.lower[j],
            NonBasic::Upper => self.upper[j],
            NonBasic::Zero => 0.0,
        };
    }

    fn recompute_basics(&mut self) {
        let mut rhs = std::mem::take(&mut self.rho);
        rhs.fill(0.0);
        for j in 0..self.total() {
            if self.pos_of[j] != NONE {
                continue;
            }
            let xj = self.x[j];
            if xj != 0.0 {
                self.for_column(j, |i, a| rhs[i] -= a * xj);
            }
        }
        self.ftran(&mut rhs);
        for (p, &j) in self.basis.iter().enumerate() {
            self.x[j] = rhs[p];
        }
        self.rho = rhs;
    }

    fn ftran(&mut self, v: &mut [f64]) {
        self.lu.as_mut().expect("factorized").ftran(v);
        for e in &self.etas {
            let xr = v[e.pos] / e.pivot;
            v[e.pos] = xr;
            if xr != 0.0 {
                for (&i, &a) in e.idx.iter().zip(&e.val) {
                    v[i] -= a * xr;
                }
            }
        }
    }

    fn btran(&mut self, v: &mut [f64]) {
        for e in self.etas.iter().rev() {
            let mut s = v[e.pos];
            for (&i, &a) in e.idx.iter().zip(&e.val) {
                s -= v[i] * a;
            }
            v[e.pos] = s / e.pivot;
        }
        self.lu.as_mut().expect("factorized").btran(v);
    }

    /// Sets the phase costs of the basis from the current point and marks
    /// the reduced costs stale if they changed; returns whether the basis is
    /// primal infeasible (phase 1).
    fn phase_costs(&mut self) -> bool {
        let mut phase1 = false;
        for (p, &j) in self.basis.iter().enumerate() {
            let v = self.x[j];
            self.cb_new[p] = if v < self.lower[j] - self.feas_tol {
                -1.0
            } else if v > self.upper[j] + self.feas_tol {
                1.0
            } else {
                0.0
            };
            phase1 |= self.cb_new[p] != 0.0;
        }
        if !phase1 {
            for (p, &j) in self.basis.iter().enumerate() {
                self.cb_new[p] = self.cost[j];
            }
        }
        if phase1 != self.phase1 || self.cb_new != self.cb {
            self.stale = true;
        }
        std::mem::swap(&mut self.cb, &mut self.cb_new);
        self.phase1 = phase1;
        phase1
    }

    /// Cost of nonbasic column `j` in the current phase.
    fn nonbasic_cost(&self, j: usize) -> f64 {
        if self.phase1 {
            0.0
        } else {
            self.cost[j]
        }
    }

    /// Duals into `self.y` and reduced costs into `self.d` from scratch.
    fn recompute_duals(&mut self) {
        let mut y = std::mem::take(&mut self.y);
        y.copy_from_slice(&self.cb);
        self.btran(&mut y);
        self.y = y;
        for j in 0..self.total() {
            if self.pos_of[j] == NONE {
                self.d[j] = self.nonbasic_cost(j) - self.dot_y(j);
            }
        }
        self.stale = false;
    }

    /// Returns the entering variable and its direction (+1 increase, -1 decrease).
    fn price(&self, rule: &Pricing) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        let mut best_score = 0.0;
        for j in 0..self.total() {
            if self.pos_of[j] != NONE || self.lower[j] == self.upper[j] {
                continue;
            }
            let d = self.d[j];
            let dir = match self.nb_state[j] {
                NonBasic::Lower if d < -self.opt_tol => 1.0,
                NonBasic::Upper if d > self.opt_tol => -1.0,
                NonBasic::Zero if d.abs() > self.opt_tol => -d.signum(),
                _ => continue,
            };
            match rule {
                Pricing::Bland => return Some((j, dir)),
                Pricing::Devex => {
                    let score = d * d / self.weights[j];
                    if score > best_score {
                        best_score = score;
                        best = Some((j, dir));
                    }
                }
            }
        }
        best
    }

    fn target_bound(&self, j: usize, rate: f64) -> f64 {
        let v = self.x[j];
        if rate > 0.0 {
            if v < self.lower[j] - self.feas_tol {
                self.lower[j]
            } else if v > self.upper[j] + self.feas_tol {
                f64::INFINITY
            } else {
                self.upper[j]
            }
        } else if v > self.upper[j] + self.feas_tol {
            self.upper[j]
        } else if v < self.lower[j] - self.feas_tol {
            f64::NEG_INFINITY
        } else {
            self.lower[j]
        }
    }

    /// Ratio test on `self.alpha` for entering direction `dir`. Returns the
    /// step length and the leaving position (NONE for a bound flip), or None
    /// when the step is unbounded.
    fn ratio_test(&self, q: usize, dir: f64, rule: &Pricing) -> Option<(f64, usize)> {
        let range = self.upper[q] - self.lower[q];
        match rule {
            Pricing::Devex => {
                let mut theta_max = f64::INFINITY;
                for p in 0..self.m {
                    let a = self.alpha[p];
                    if a.abs() < PIVOT_TOL {
                        continue;
                    }
                    let rate = -dir * a;
                    let j = self.basis[p];
                    let t = self.target_bound(j, rate);
                    if !t.is_finite() {
                        continue;
                    }
                    let slack = if rate > 0.0 { self.feas_tol } else { -self.feas_tol };
                    let r = (t - self.x[j] + slack) / rate;
                    theta_max = theta_max.min(r);
                }
                if range.is_finite() && range <= theta_max {
                    return Some((range, NONE));
                }
                if !theta_max.is_finite() {
                    return None;
                }
                let mut leave = NONE;
                let mut best_piv = 0.0;
                let mut theta = 0.0;
                for p in 0..self.m {
                    let a = self.alpha[p];
                    if a.abs() < PIVOT_TOL {
                        continue;
                    }
                    let rate = -dir * a;
                    let j = self.basis[p];
                    let t = self.target_bound(j, rate);
                    if !t.is_finite() {
                        continue;
                    }
                    let r = ((t - self.x[j]) / rate).max(0.0);
                    if r <= theta_max && a.abs() > best_piv {
                        best_piv = a.abs();
                        leave = p;
                        theta = r;
                    }
                }
                if leave == NONE {
                    return None;
                }
                Some((theta, leave))
            }
            Pricing::Bland => {
                let mut theta = f64::INFINITY;
                let mut leave = NONE;
                for p in 0..self.m {
                    let a = self.alpha[p];
                    if a.abs() < PIVOT_TOL {
                        continue;
                    }
                    let rate = -dir * a;
                    let j = self.basis[p];
                    let t = self.target_bound(j, rate);
                    if !t.is_finite() {
                        continue;
                    }
                    let r = ((t - self.x[j]) / rate).max(0.0);
                    let tie = (r - theta).abs() <= 1e-12 * (1.0 + theta.abs());
                    if r < theta && !tie || (tie && leave != NONE && j < self.basis[leave]) {
                        theta = r;
                        leave = p;
                    } else if leave == NONE && r < theta {
                        theta = r;
                        leave = p;
                    }
                }
                if range.is_finite() && range <= theta {
                    return Some((range, NONE));
                }
                if leave == NONE {
                    return None;
                }
                Some((theta, leave))
            }
        }
    }

    fn pivot(&mut self, q: usize, dir: f64, theta: f64, leave: usize) {
        let leave_target =
            if leave == NONE { 0.0 } else { self.target_bound(self.basis[leave], -dir * self.alpha[leave]) };
        for p in 0..self.m {
            let a = self.alpha[p];
            if a != 0.0 {
                let j = self.basis[p];
                self.x[j] -= dir * theta * a;
            }
        }
        if leave == NONE {
            // Bound flip of the entering variable.
            let state = if dir > 0.0 { NonBasic::Upper } else { NonBasic::Lower };
            self.set_nonbasic(q, state);
            return;
        }
        let xq = self.x[q] + dir * theta;
        let out = self.basis[leave];
        let state = if leave_target == self.lower[out] { NonBasic::Lower } else { NonBasic::Upper };
        self.pos_of[out] = NONE;
        self.set_nonbasic(out, state);

        self.basis[leave] = q;
        self.pos_of[q] = leave;
        self.x[q] = xq;

        let mut idx = Vec::new();
        let mut val = Vec::new();
        for (p, &a) in self.alpha.iter().enumerate() {
            if p != leave && a.abs() > 1e-14 {
                idx.push(p);
                val.push(a);
            }
        }
        self.eta_nnz += idx.len();
        self.etas.push(Eta { pos: leave, pivot: self.alpha[leave], idx, val });
    }

    /// Updates reduced costs (and devex weights when `devex`) for entering
    /// `q` and leaving position `leave`; called before the basis changes.
    fn update_pricing(&mut self, q: usize, leave: usize, devex: bool) {
        let arq = self.alpha[leave];
        let wq = self.weights[q];
        let theta_d = self.d[q] / arq;
        let mut rho = std::mem::take(&mut self.rho);
        rho.fill(0.0);
        rho[leave] = 1.0;
        self.btran(&mut rho);

        // Pivot row over the nonbasic columns.
        for (i, &r) in rho.iter().enumerate() {
            if r == 0.0 {
                continue;
            }
            for p in self.row_start[i]..self.row_start[i + 1] {
                let j = self.row_col[p];
                if self.pos_of[j] != NONE || self.lower[j] == self.upper[j] {
                    continue;
                }
                if !self.mark[j] {
                    self.mark[j] = true;
                    self.touched.push(j);
                }
                self.alpha_r[j] += r * self.row_val[p];
            }
            let j = self.n + i;
            if self.pos_of[j] == NONE && self.lower[j] != self.upper[j] {
                self.mark[j] = true;
                self.touched.push(j);
                self.alpha_r[j] = -r;
            }
        }
        self.rho = rho;

        let mut reset = false;
        for &j in &self.touched {
            let arj = self.alpha_r[j];
            self.alpha_r[j] = 0.0;
            self.mark[j] = false;
            if j == q || arj == 0.0 {
                continue;
            }
            self.d[j] -= theta_d * arj;
            if devex {
                let r = arj / arq;
                let w = (r * r * wq).max(self.weights[j]);
                self.weights[j] = w;
                reset |= w > DEVEX_RESET;
            }
        }
        self.touched.clear();

        let out = self.basis[leave];
        // The leaving column keeps its true cost in phase 2 but costs
        // nothing once nonbasic in phase 1.
        self.d[out] = -theta_d + self.nonbasic_cost(out) - self.cb[leave];
        self.d[q] = 0.0;
        self.cb[leave] = self.nonbasic_cost(q);
        if devex {
            self.weights[out] = (wq / (arq * arq)).max(1.0);
            if reset {
                self.weights.fill(1.0);
            }
        }
    }

    fn needs_refactor(&self) -> bool {
        let lu_nnz = self.lu.as_ref().map_or(0, |l| l.nnz());
        self.etas.len() >= REFACTOR_EVERY || self.eta_nnz > 2 * lu_nnz + 10 * self.m
    }

    fn run(&mut self, max_iter: usize) -> Status {
        self.refactor();
        let mut degenerate_run = 0usize;
        let mut rule = Pricing::Devex;
        let mut stalls = 0usize;
        loop {
            if self.iterations >= max_iter {
                return Status::IterationLimit;
            }
            if self.needs_refactor() {
                self.refactor();
            }
            let phase1 = self.phase_costs();
            if self.stale {
                self.recompute_duals();
            }
            let Some((q, dir)) = self.price(&rule) else {
                if !self.etas.is_empty() {
                    self.refactor();
                    continue;
                }
                return if phase1 { Status::Infeasible } else { Status::Optimal };
            };
            let mut col = std::mem::take(&mut self.alpha);
            col.fill(0.0);
            self.for_column(q, |i, a| col[i] = a);
            self.ftran(&mut col);
            self.alpha = col;

            match self.ratio_test(q, dir, &rule) {
                None => {
                    if phase1 {
                        // Phase-1 rays cannot be unbounded; treat as numerical drift.
                        stalls += 1;
                        if stalls > 5 {
                            return Status::IterationLimit;
                        }
                        self.refactor();
                        continue;
                    }
                    if !self.etas.is_empty() {
                        self.refactor();
                        continue;
                    }
                    return Status::Unbounded;
                }
                Some((theta, leave)) => {
                    self.iterations += 1;
                    if theta <= 1e-12 {
                        degenerate_run += 1;
                        if degenerate_run >= DEGENERATE_RUN_FOR_BLAND {
                            rule = Pricing::Bland;
                        }
                    } else {
                        degenerate_run = 0;
                        rule = Pricing::Devex;
                    }
                    if leave != NONE {
                        self.update_pricing(q, leave, rule == Pricing::Devex);
                    }
                    self.pivot(q, dir, theta, leave);
                }
            }
        }
    }
}

/// Solves `lp` with the embedded simplex method.
pub fn solve(lp: &LinearProgram, opts: &SolveOptions) -> Result<Solution, LpError> {
    lp.validate()?;
    let n = lp.num_vars();
    let m = lp.num_rows();

    // Compressed columns of A.
    let mut counts = vec![0usize; n + 1];
    for c in &lp.constraints {
        for &(v, a) in &c.terms {
            if a != 0.0 {
                counts[v.0 + 1] += 1;
            }
        }
    }
    for j in 0..n {
        counts[j + 1] += counts[j];
    }
    let col_start = counts.clone();
    let nnz = col_start[n];
    let mut fill = col_start.clone();
    let mut row_idx = vec![0; nnz];
    let mut vals = vec![0.0; nnz];
    for (i, c) in lp.constraints.iter().enumerate() {
        for &(v, a) in &c.terms {
            if a != 0.0 {
                let p = fill[v.0];
                row_idx[p] = i;
                vals[p] = a;
                fill[v.0] += 1;
            }
        }
    }
    let orig_cost: Vec<f64> = lp.variables.iter().map(|v| v.cost).collect();
    let sc = scaling::compute(m, &col_start, &row_idx, &vals, &orig_cost);
    for j in 0..n {
        for p in col_start[j]..col_start[j + 1] {
            vals[p] *= sc.row[row_idx[p]] * sc.col[j];
        }
    }

    let mut row_start = vec![0usize; m + 1];
    for &i in &row_idx {
        row_start[i + 1] += 1;
    }
    for i in 0..m {
        row_start[i + 1] += row_start[i];
    }
    let mut rfill = row_start.clone();
    let mut row_col = vec![0usize; nnz];
    let mut row_val = vec![0.0; nnz];
    for j in 0..n {
        for p in col_start[j]..col_start[j + 1] {
            let q = rfill[row_idx[p]];
            rfill[row_idx[p]] += 1;
            row_col[q] = j;
            row_val[q] = vals[p];
        }
    }

    let total = n + m;
    let mut lower = Vec::with_capacity(total);
    let mut upper = Vec::with_capacity(total);
    let mut cost = Vec::with_capacity(total);
    for (j, v) in lp.variables.iter().enumerate() {
        lower.push(v.lower / sc.col[j]);
        upper.push(v.upper / sc.col[j]);
        cost.push(v.cost * sc.col[j] / sc.obj);
    }
    for (i, c) in lp.constraints.iter().enumerate() {
        let b = c.rhs * sc.row[i];
        let (l, u) = match c.sense {
            Sense::Le => (f64::NEG_INFINITY, b),
            Sense::Ge => (b, f64::INFINITY),
            Sense::Eq => (b, b),
        };
        lower.push(l);
        upper.push(u);
        cost.push(0.0);
    }

    let mut s = Simplex {
        m,
        n,
        col_start,
        row_idx,
        vals,
        row_start,
        row_col,
        row_val,
        lower,
        upper,
        cost,
        x: vec![0.0; total],
        pos_of: vec![NONE; total],
        nb_state: vec![NonBasic::Zero; total],
        basis: (n..total).collect(),
        lu: None,
        etas: Vec::new(),
        eta_nnz: 0,
        feas_tol: opts.feas_tol,
        opt_tol: opts.opt_tol,
        iterations: 0,
        weights: vec![1.0; total],
        d: vec![0.0; total],
        cb: vec![0.0; m],
        phase1: false,
        stale: true,
        y: vec![0.0; m],
        alpha: vec![0.0; m],
        cb_new: vec![0.0; m],
        rho: vec![0.0; m],
        alpha_r: vec![0.0; total],
        touched: Vec::new(),
        mark: vec![false; total],
    };
    for j in 0..n {
        s.make_nonbasic_at_nearest(j);
    }
    for (p, j) in (n..total).enumerate() {
        s.pos_of[j] = p;
    }

    let max_iter = if opts.max_iterations > 0 { opts.max_iterations } else { 50 * (n + m) + 10_000 };
    let status = s.run(max_iter);
    if status != Status::Optimal {
        return Ok(Solution::not_optimal(status, lp, s.iterations));
    }

    s.phase_costs();
    s.recompute_duals();
    let primal: Vec<f64> = (0..n).map(|j| s.x[j] * sc.col[j]).collect();
    let dual: Vec<f64> = (0..m).map(|i| s.y[i] * sc.row[i] * sc.obj).collect();
    let mut reduced = orig_cost;
    for c in lp.constraints.iter().zip(&dual) {
        let (row, y) = c;
        for &(v, a) in &row.terms {
            reduced[v.0] -= y * a;
        }
    }
    for (j, d) in reduced.iter_mut().enumerate() {
        if s.pos_of[j] != NONE {
            *d = 0.0;
        }
    }
    Ok(Solution::from_parts(lp, Status::Optimal, primal, dual, reduced, s.iterations))
}
