//! DIRECT (DIviding RECTangles) Lipschitzian maximization over a box.
//!
//! Deterministic: the unit cube is trisected recursively, potentially optimal
//! rectangles are selected by the usual convex-hull criterion on
//! (half-diagonal, best value) with an epsilon guard, and every tie breaks
//! toward the lowest rectangle index. Rectangles whose longest side falls
//! below `min_side` are no longer divided.

use crate::domain::BoxDomain;

#[derive(Debug, Clone)]
pub struct DirectConfig {
    /// Evaluation budget.
    pub max_evals: usize,
    /// Per-side floor below which a rectangle is not divided further.
    pub min_side: f64,
}

impl Default for DirectConfig {
    fn default() -> Self {
        Self {
            max_evals: 2000,
            min_side: 1e-6,
        }
    }
}

struct Rect {
    center: Vec<f64>,
    /// Number of trisections per dimension; side length is `3^-level`.
    levels: Vec<u32>,
    value: f64,
    measure: f64,
}

fn measure_of(levels: &[u32]) -> f64 {
    // Half-diagonal; summed in descending side order so identical level
    // multisets produce bit-identical measures.
    let mut sides: Vec<f64> = levels.iter().map(|l| 3f64.powi(-(*l as i32))).collect();
    sides.sort_by(|a, b| b.total_cmp(a));
    0.5 * sides.iter().map(|s| s * s).sum::<f64>().sqrt()
}

/// Maximize `f` over `domain`. Returns the best sampled point and its value.
pub fn maximize<F>(f: F, domain: &BoxDomain, cfg: &DirectConfig) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let d = domain.dims();
    let eval = |u: &[f64]| f(&domain.from_unit(u));
    let center = vec![0.5; d];
    let v0 = eval(&center);
    let mut evals = 1usize;
    let mut rects = vec![Rect {
        center: center.clone(),
        levels: vec![0; d],
        value: v0,
        measure: measure_of(&vec![0; d]),
    }];
    let mut best_x = center;
    let mut best_v = v0;

    while evals < cfg.max_evals {
        let selected = potentially_optimal(&rects, best_v, cfg.min_side);
        if selected.is_empty() {
            break;
        }
        let mut progressed = false;
        for idx in selected {
            // Dimensions with the largest side are divided together.
            let min_level = *rects[idx].levels.iter().min().unwrap();
            let side = 3f64.powi(-(min_level as i32));
            let dims: Vec<usize> = (0..d)
                .filter(|&l| rects[idx].levels[l] == min_level)
                .collect();
            let need = 2 * dims.len();
            if evals + need > cfg.max_evals {
                continue;
            }
            evals += need;
            progressed = true;
            let delta = side / 3.0;
            // Probe both neighbors along each long dimension.
            let mut probes: Vec<(usize, Vec<f64>, Vec<f64>)> = Vec::with_capacity(dims.len());
            for &l in &dims {
                let mut plus = rects[idx].center.clone();
                let mut minus = rects[idx].center.clone();
                plus[l] += delta;
                minus[l] -= delta;
                probes.push((l, plus, minus));
            }
            let values: Vec<(f64, f64)> = probes
                .iter()
                .map(|(_, p, m)| (eval(p), eval(m)))
                .collect();
            for ((_, p, m), (vp, vm)) in probes.iter().zip(&values) {
                if *vp > best_v {
                    best_v = *vp;
                    best_x = p.clone();
                }
                if *vm > best_v {
                    best_v = *vm;
                    best_x = m.clone();
                }
            }
            // Best-first division: the dimension with the better probe value
            // gets the largest child rectangles.
            let mut order: Vec<usize> = (0..dims.len()).collect();
            order.sort_by(|&a, &b| {
                let wa = values[a].0.max(values[a].1);
                let wb = values[b].0.max(values[b].1);
                wb.total_cmp(&wa).then(dims[a].cmp(&dims[b]))
            });
            let mut levels = rects[idx].levels.clone();
            for &k in &order {
                let (l, plus, minus) = &probes[k];
                let (vp, vm) = values[k];
                levels[*l] += 1;
                let m = measure_of(&levels);
                rects.push(Rect {
                    center: plus.clone(),
                    levels: levels.clone(),
                    value: vp,
                    measure: m,
                });
                rects.push(Rect {
                    center: minus.clone(),
                    levels: levels.clone(),
                    value: vm,
                    measure: m,
                });
            }
            rects[idx].levels = levels.clone();
            rects[idx].measure = measure_of(&levels);
        }
        if !progressed {
            break;
        }
    }
    (domain.from_unit(&best_x), best_v)
}

/// Indices of potentially optimal rectangles: per measure class, the best
/// value; a class survives if some K > 0 makes it at least as good as every
/// other class and better than `best + eps|best|`.
fn potentially_optimal(rects: &[Rect], best_v: f64, min_side: f64) -> Vec<usize> {
    const EPS: f64 = 1e-4;
    // Group by exact measure value; keep the best rect per group.
    let mut groups: Vec<(f64, usize)> = Vec::new();
    for (i, r) in rects.iter().enumerate() {
        let min_level = *r.levels.iter().min().unwrap();
        if 3f64.powi(-(min_level as i32)) <= min_side {
            continue;
        }
        match groups
            .iter_mut()
            .find(|(m, _)| m.to_bits() == r.measure.to_bits())
        {
            Some((_, j)) => {
                if r.value > rects[*j].value {
                    *j = i;
                }
            }
            None => groups.push((r.measure, i)),
        }
    }
    groups.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let threshold = best_v + EPS * best_v.abs();
    let mut out = Vec::new();
    'cand: for (gi, &(m, i)) in groups.iter().enumerate() {
        let v = rects[i].value;
        // Lower bound on K from smaller rectangles, upper bound from larger.
        let mut k_lo = 0.0f64;
        for &(m2, j) in &groups[..gi] {
            let dv = rects[j].value - v;
            let dm = m - m2;
            if dm > 0.0 {
                k_lo = k_lo.max(dv / dm);
            }
        }
        let mut k_hi = f64::INFINITY;
        for &(m2, j) in &groups[gi + 1..] {
            let dv = v - rects[j].value;
            let dm = m2 - m;
            if dm > 0.0 {
                if dv < 0.0 {
                    continue 'cand;
                }
                k_hi = k_hi.min(dv / dm);
            }
        }
        // Epsilon condition: v + K m >= threshold for some feasible K.
        let k_needed = if v >= threshold { 0.0 } else { (threshold - v) / m };
        if k_lo.max(k_needed) <= k_hi {
            out.push(i);
        }
    }
    out
}
