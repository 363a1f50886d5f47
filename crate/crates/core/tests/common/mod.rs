//! Shared oracles and fixtures for the integration tests.
#![allow(dead_code)]

pub mod fixtures;
pub mod manifest;

use h2match_core::lp::{LinearProgram, Sense, VarId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Solves the dense square system `a x = b` by Gaussian elimination with
/// partial pivoting; `None` when the system is (numerically) singular.
pub fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for k in 0..n {
        let p = (k..n).max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))?;
        if a[p][k].abs() < 1e-10 {
            return None;
        }
        a.swap(k, p);
        b.swap(k, p);
        for i in k + 1..n {
            let f = a[i][k] / a[k][k];
            if f != 0.0 {
                for j in k..n {
                    a[i][j] -= f * a[k][j];
                }
                b[i] -= f * b[k];
            }
        }
    }
    let mut x = vec![0.0; n];
    for k in (0..n).rev() {
        let s: f64 = (k + 1..n).map(|j| a[k][j] * x[j]).sum();
        x[k] = (b[k] - s) / a[k][k];
    }
    Some(x)
}

fn for_each_subset(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::with_capacity(k), f);
}

/// Minimum objective over all basic feasible solutions of an LP whose
/// variables all have finite bounds. Every vertex is the intersection of
/// `n` linearly independent active constraints drawn from the rows and the
/// bounds.
pub fn vertex_enumeration_min(lp: &LinearProgram) -> Option<f64> {
    let n = lp.num_vars();
    let m = lp.num_rows();
    let dense_row = |i: usize| {
        let mut r = vec![0.0; n];
        for &(v, a) in &lp.constraints[i].terms {
            r[v.0] += a;
        }
        r
    };
    // Candidate active constraints: rows, then lower bounds, then upper bounds.
    let mut best: Option<f64> = None;
    for_each_subset(m + 2 * n, n, &mut |pick| {
        let mut a = Vec::with_capacity(n);
        let mut b = Vec::with_capacity(n);
        for &c in pick {
            if c < m {
                a.push(dense_row(c));
                b.push(lp.constraints[c].rhs);
            } else {
                let j = (c - m) % n;
                let mut r = vec![0.0; n];
                r[j] = 1.0;
                a.push(r);
                b.push(if c - m >= n { lp.variables[j].upper } else { lp.variables[j].lower });
            }
        }
        if let Some(x) = dense_solve(a, b) {
            if lp.max_violation(&x) <= 1e-9 {
                let z = lp.objective_value(&x);
                if best.map_or(true, |bz| z < bz) {
                    best = Some(z);
                }
            }
        }
    });
    best
}

/// A random feasible LP with finite bounds, built around an interior point.
pub fn random_bounded_lp(seed: u64, n: usize, m: usize) -> LinearProgram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lp = LinearProgram::new(format!("random_{seed}"));
    let mut x0 = Vec::with_capacity(n);
    for j in 0..n {
        let lo = rng.random_range(-5.0..2.0f64).round();
        let hi = lo + rng.random_range(1.0..8.0f64).round();
        let cost = rng.random_range(-10.0..10.0f64);
        lp.add_var(format!("x{j}"), lo, hi, cost);
        x0.push(rng.random_range(lo..hi));
    }
    for i in 0..m {
        let mut terms = Vec::new();
        for j in 0..n {
            if rng.random_bool(0.6) {
                terms.push((VarId(j), rng.random_range(-4.0..4.0f64)));
            }
        }
        if terms.is_empty() {
            terms.push((VarId(rng.random_range(0..n)), 1.0));
        }
        let act: f64 = terms.iter().map(|&(v, a)| a * x0[v.0]).sum();
        let (sense, rhs) = match rng.random_range(0..10) {
            0 => (Sense::Eq, act),
            1..=5 => (Sense::Le, act + rng.random_range(0.0..3.0)),
            _ => (Sense::Ge, act - rng.random_range(0.0..3.0)),
        };
        lp.add_row(format!("r{i}"), terms, sense, rhs);
    }
    lp
}
