//! Pareto dominance, nondominated filtering, and the sampled-frontier type.
//!
//! Dominance is weak throughout: `a` dominates `b` when `a_l >= b_l` in every
//! objective. Exact duplicate vectors are merged before filtering so that the
//! frontier never contains two copies of the same point.

use crate::error::{PfesError, Result};

/// Weak Pareto dominance: `a` dominates `b` iff `a_l >= b_l` for every `l`.
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    assert_eq!(a.len(), b.len(), "dominance needs equal-length vectors");
    a.iter().zip(b).all(|(x, y)| x >= y)
}

/// A finite set of mutually nondominated objective vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct ParetoFrontier {
    points: Vec<Vec<f64>>,
}

impl ParetoFrontier {
    /// Filter `points` down to the nondominated subset, merge exact ties, and
    /// truncate to `max_size` by crowding distance.
    pub fn from_points(points: Vec<Vec<f64>>, max_size: usize) -> Result<Self> {
        if max_size == 0 {
            return Err(PfesError::InvalidInput("frontier max_size must be >= 1".into()));
        }
        let mut kept = nondominated_subset(points)?;
        if kept.len() > max_size {
            kept = crowding_truncate(kept, max_size);
        }
        Ok(Self { points: kept })
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Number of objectives L.
    pub fn objectives(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }

    /// True iff `f` is weakly dominated by at least one frontier point.
    pub fn dominates_point(&self, f: &[f64]) -> bool {
        self.points.iter().any(|p| dominates(p, f))
    }
}

/// Retain exactly the points not weakly dominated by a distinct point.
pub fn nondominated_filter(points: &[Vec<f64>]) -> Result<ParetoFrontier> {
    Ok(ParetoFrontier {
        points: nondominated_subset(points.to_vec())?,
    })
}

/// Sweep-based nondominated subset with exact-duplicate merging.
///
/// After lexicographic descending sort a dominator always precedes what it
/// dominates, so each point only has to be tested against the points already
/// retained.
fn nondominated_subset(mut points: Vec<Vec<f64>>) -> Result<Vec<Vec<f64>>> {
    if points.is_empty() {
        return Ok(points);
    }
    let dims = points[0].len();
    for p in &points {
        if p.len() != dims {
            return Err(PfesError::DimensionMismatch(
                "objective vectors have inconsistent lengths".into(),
            ));
        }
        if p.iter().any(|v| v.is_nan()) {
            return Err(PfesError::InvalidInput("objective vector contains NaN".into()));
        }
    }
    points.sort_by(|a, b| {
        for (x, y) in a.iter().zip(b) {
            match y.total_cmp(x) {
                std::cmp::Ordering::Equal => continue,
                other => return other,
            }
        }
        std::cmp::Ordering::Equal
    });
    points.dedup();
    let mut kept: Vec<Vec<f64>> = Vec::new();
    for p in points {
        if !kept.iter().any(|q| dominates(q, &p)) {
            kept.push(p);
        }
    }
    Ok(kept)
}

/// NSGA-II crowding distances for a set of mutually comparable vectors.
pub fn crowding_distances(points: &[Vec<f64>]) -> Vec<f64> {
    let n = points.len();
    let mut dist = vec![0.0f64; n];
    if n == 0 {
        return dist;
    }
    let dims = points[0].len();
    let mut order: Vec<usize> = (0..n).collect();
    for l in 0..dims {
        order.sort_by(|&a, &b| points[a][l].total_cmp(&points[b][l]).then(a.cmp(&b)));
        let lo = points[order[0]][l];
        let hi = points[order[n - 1]][l];
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        let span = hi - lo;
        if span <= 0.0 {
            continue;
        }
        for w in 1..n.saturating_sub(1) {
            let gap = points[order[w + 1]][l] - points[order[w - 1]][l];
            dist[order[w]] += gap / span;
        }
    }
    dist
}

/// Keep the `max_size` points with the largest crowding distance, preserving
/// the original relative order of the survivors.
pub fn crowding_truncate(points: Vec<Vec<f64>>, max_size: usize) -> Vec<Vec<f64>> {
    if points.len() <= max_size {
        return points;
    }
    let dist = crowding_distances(&points);
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| dist[b].total_cmp(&dist[a]).then(a.cmp(&b)));
    let mut selected: Vec<usize> = idx.into_iter().take(max_size).collect();
    selected.sort_unstable();
    let mut points = points;
    let mut out = Vec::with_capacity(max_size);
    for i in selected {
        out.push(std::mem::take(&mut points[i]));
    }
    out
}
