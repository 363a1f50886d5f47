use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ScenarioError, ScenarioLibrary};

pub const MAX_LLOYD_ITERATIONS: usize = 300;

/// Result of Lloyd's algorithm.
#[derive(Debug, Clone, PartialEq)]
pub struct KMeans {
    /// Cluster of each point.
    pub assignments: Vec<usize>,
    pub centroids: Vec<Vec<f64>>,
    /// Within-cluster sum of squares after each assignment step.
    pub sse_history: Vec<f64>,
}

impl KMeans {
    /// Index of the member closest to its centroid, per non-empty cluster
    /// (ties go to the lower index).
    pub fn medoids(&self, points: &[Vec<f64>]) -> Vec<usize> {
        let mut best: Vec<Option<(f64, usize)>> = vec![None; self.centroids.len()];
        for (i, &c) in self.assignments.iter().enumerate() {
            let d = dist2(&points[i], &self.centroids[c]);
            if best[c].map_or(true, |(bd, _)| d < bd) {
                best[c] = Some((d, i));
            }
        }
        best.into_iter().flatten().map(|(_, i)| i).collect()
    }
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(p: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, cen) in centroids.iter().enumerate() {
        let d = dist2(p, cen);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

/// k-means++ seeding followed by Lloyd iterations until the assignment is
/// stable or [`MAX_LLOYD_ITERATIONS`] is reached. Euclidean distance.
pub fn kmeans(points: &[Vec<f64>], k: usize, seed: u64) -> Result<KMeans, ScenarioError> {
    let n = points.len();
    if n == 0 {
        return Err(ScenarioError::EmptyLibrary);
    }
    if k == 0 || k > n {
        return Err(ScenarioError::BadK { k, years: n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = vec![rng.random_range(0..n)];
    let mut d2: Vec<f64> = points.iter().map(|p| dist2(p, &points[chosen[0]])).collect();
    while chosen.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let mut r = rng.random::<f64>() * total;
            let mut pick = n - 1;
            for (i, &d) in d2.iter().enumerate() {
                if d > 0.0 && r < d {
                    pick = i;
                    break;
                }
                r -= d;
            }
            while d2[pick] == 0.0 {
                pick -= 1;
            }
            pick
        } else {
            // every remaining point duplicates a center
            (0..n).find(|i| !chosen.contains(i)).unwrap_or(0)
        };
        chosen.push(next);
        for (i, p) in points.iter().enumerate() {
            d2[i] = d2[i].min(dist2(p, &points[next]));
        }
    }
    let mut centroids: Vec<Vec<f64>> = chosen.iter().map(|&i| points[i].clone()).collect();
    let mut assignments = vec![usize::MAX; n];
    let mut sse_history = Vec::new();
    for _ in 0..MAX_LLOYD_ITERATIONS {
        let mut changed = false;
        let mut sse = 0.0;
        for (i, p) in points.iter().enumerate() {
            let (c, d) = nearest(p, &centroids);
            sse += d;
            if assignments[i] != c {
                assignments[i] = c;
                changed = true;
            }
        }
        sse_history.push(sse);
        if !changed {
            break;
        }
        let dim = points[0].len();
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (i, p) in points.iter().enumerate() {
            counts[assignments[i]] += 1;
            for (s, x) in sums[assignments[i]].iter_mut().zip(p) {
                *s += x;
            }
        }
        for c in 0..k {
            // an empty cluster keeps its previous centroid
            if counts[c] > 0 {
                centroids[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            }
        }
    }
    Ok(KMeans { assignments, centroids, sse_history })
}

/// Representative design years: the medoid year of each k-means cluster of
/// the `feature_group` capacity-factor series, ascending.
pub fn kmeans_reduce(
    library: &ScenarioLibrary,
    k: usize,
    seed: u64,
    feature_group: &str,
) -> Result<Vec<i32>, ScenarioError> {
    if library.years.is_empty() {
        return Err(ScenarioError::EmptyLibrary);
    }
    let years: Vec<i32> = library.years.keys().copied().collect();
    let points = library
        .years
        .iter()
        .map(|(&y, s)| {
            s.cf_by_group
                .get(feature_group)
                .cloned()
                .ok_or_else(|| ScenarioError::MissingFeature { group: feature_group.into(), year: y })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let km = kmeans(&points, k, seed)?;
    let mut out: Vec<i32> = km.medoids(&points).into_iter().map(|i| years[i]).collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_equal_n_selects_every_point() {
        let pts: Vec<Vec<f64>> = (0..5).map(|i| vec![i as f64, (i * i) as f64]).collect();
        let km = kmeans(&pts, 5, 3).unwrap();
        let mut m = km.medoids(&pts);
        m.sort_unstable();
        assert_eq!(m, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn duplicates_collapse_to_one_cluster() {
        let pts = vec![vec![1.0, 2.0], vec![1.0, 2.0]];
        let km = kmeans(&pts, 1, 0).unwrap();
        assert_eq!(km.sse_history.last().copied(), Some(0.0));
        assert_eq!(km.medoids(&pts).len(), 1);
    }

    #[test]
    fn rejects_bad_k() {
        let pts = vec![vec![0.0]];
        assert!(matches!(kmeans(&pts, 0, 0), Err(ScenarioError::BadK { .. })));
        assert!(matches!(kmeans(&pts, 2, 0), Err(ScenarioError::BadK { .. })));
        assert!(matches!(kmeans(&[], 1, 0), Err(ScenarioError::EmptyLibrary)));
    }
}
