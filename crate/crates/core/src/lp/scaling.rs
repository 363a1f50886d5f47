//! Geometric-mean row/column scaling, rounded to powers of two so that
//! scaling and unscaling are exact in floating point.

pub(crate) struct Scaling {
    pub row: Vec<f64>,
    pub col: Vec<f64>,
    pub obj: f64,
}

fn pow2(x: f64) -> f64 {
    if !x.is_finite() || x <= 0.0 {
        return 1.0;
    }
    2f64.powi(x.log2().round() as i32)
}

/// Computes scale factors for a matrix given in compressed-column form.
pub(crate) fn compute(m: usize, col_start: &[usize], row_idx: &[usize], vals: &[f64], cost: &[f64]) -> Scaling {
    let n = col_start.len() - 1;
    let mut row = vec![1.0; m];
    let mut col = vec![1.0; n];

    for _ in 0..6 {
        let mut rmin = vec![f64::INFINITY; m];
        let mut rmax = vec![0.0f64; m];
        for j in 0..n {
            for p in col_start[j]..col_start[j + 1] {
                let a = (vals[p] * col[j]).abs();
                if a > 0.0 {
                    let i = row_idx[p];
                    rmin[i] = rmin[i].min(a);
                    rmax[i] = rmax[i].max(a);
                }
            }
        }
        for i in 0..m {
            if rmax[i] > 0.0 {
                row[i] = 1.0 / (rmin[i] * rmax[i]).sqrt();
            }
        }
        for j in 0..n {
            let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
            for p in col_start[j]..col_start[j + 1] {
                let a = (vals[p] * row[row_idx[p]]).abs();
                if a > 0.0 {
                    lo = lo.min(a);
                    hi = hi.max(a);
                }
            }
            if hi > 0.0 {
                col[j] = 1.0 / (lo * hi).sqrt();
            }
        }
    }
    for r in &mut row {
        *r = pow2(*r);
    }
    for c in &mut col {
        *c = pow2(*c);
    }
    // Geometric mean rather than maximum: penalty costs several orders above
    // the rest would otherwise push ordinary costs under the optimality
    // tolerance.
    let (mut log_sum, mut count) = (0.0, 0usize);
    for (c, s) in cost.iter().zip(&col) {
        let a = (c * s).abs();
        if a > 0.0 && a.is_finite() {
            log_sum += a.ln();
            count += 1;
        }
    }
    let obj = if count > 0 { pow2((log_sum / count as f64).exp()) } else { 1.0 };
    Scaling { row, col, obj }
}
