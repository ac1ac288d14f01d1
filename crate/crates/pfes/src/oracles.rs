//! Independent reference implementations used to verify the analytic paths:
//! numeric quadrature for the PFTN entropies, Monte-Carlo estimators for
//! entropy and hypervolume, a dense-inverse GP predictor, and the pairwise
//! nondominance filter.
//!
//! These deliberately share no factorization, CDF-table, or closed-form code
//! with the production implementations. Masses are obtained by integrating
//! the Gaussian density with Gauss-Legendre panels rather than via Φ.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::gp::{gaussian_kernel, Dataset, KernelConfig, PredictiveDistribution};
use crate::pareto::{dominates, ParetoFrontier};
use crate::partition::CellPartition;

/// Standardized clipping range: mass outside ±CLIP is ~1e-19 and irrelevant
/// at the 1e-9 accuracy these oracles target.
const CLIP: f64 = 9.0;
const PANEL_WIDTH: f64 = 3.0;
const GL_NODES: usize = 16;

/// Gauss-Legendre nodes and weights on [-1, 1] via Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Composite Gauss-Legendre integral of `f` over `[a, b]`.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let (nodes, weights) = gauss_legendre(GL_NODES);
    let panels = ((b - a) / PANEL_WIDTH).ceil().max(1.0) as usize;
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        let half = 0.5 * h;
        let mut acc = 0.0;
        for (x, w) in nodes.iter().zip(&weights) {
            acc += w * f(mid + half * x);
        }
        total += acc * half;
    }
    total
}

#[inline]
fn log_phi(a: f64) -> f64 {
    -0.5 * a * a - 0.5 * (2.0 * std::f64::consts::PI).ln()
}

#[inline]
fn phi(a: f64) -> f64 {
    log_phi(a).exp()
}

/// Standardized cell interval of `cell` in dimension `l`, clipped.
fn std_interval(
    cell: &crate::partition::Cell,
    pred: &PredictiveDistribution,
    l: usize,
) -> (f64, f64) {
    let lo = (cell.lower()[l] - pred.mean[l]) / pred.stddev[l];
    let hi = (cell.upper()[l] - pred.mean[l]) / pred.stddev[l];
    (lo.max(-CLIP), hi.min(CLIP))
}

/// PFTN entropy by two-dimensional tensor quadrature over the cells.
///
/// Both the normalization Z and `∫ p log p` are quadrature sums; no CDF is
/// evaluated anywhere.
pub fn pftn_entropy_quadrature_2d(pred: &PredictiveDistribution, partition: &CellPartition) -> f64 {
    assert_eq!(partition.objectives(), 2, "2D quadrature oracle");
    let (nodes, weights) = gauss_legendre(GL_NODES);
    let log_sigma = pred.stddev[0].ln() + pred.stddev[1].ln();
    let mut z = 0.0;
    let mut plogp = 0.0;
    for cell in partition.cells() {
        let (a0, b0) = std_interval(cell, pred, 0);
        let (a1, b1) = std_interval(cell, pred, 1);
        if a0 >= b0 || a1 >= b1 {
            continue;
        }
        // Tensorized composite panels in standardized coordinates.
        let panels0 = panels(a0, b0);
        let panels1 = panels(a1, b1);
        for &(lo0, hi0) in &panels0 {
            for &(lo1, hi1) in &panels1 {
                let (m0, h0) = (0.5 * (lo0 + hi0), 0.5 * (hi0 - lo0));
                let (m1, h1) = (0.5 * (lo1 + hi1), 0.5 * (hi1 - lo1));
                let mut zc = 0.0;
                let mut pc = 0.0;
                for (x0, w0) in nodes.iter().zip(&weights) {
                    let u = m0 + h0 * x0;
                    let lp0 = log_phi(u);
                    for (x1, w1) in nodes.iter().zip(&weights) {
                        let v = m1 + h1 * x1;
                        let lp = lp0 + log_phi(v);
                        let dens = lp.exp();
                        let w = w0 * w1;
                        zc += w * dens;
                        pc += w * dens * (lp - log_sigma);
                    }
                }
                z += zc * h0 * h1;
                plogp += pc * h0 * h1;
            }
        }
    }
    -plogp / z + z.ln()
}

fn panels(a: f64, b: f64) -> Vec<(f64, f64)> {
    let n = ((b - a) / PANEL_WIDTH).ceil().max(1.0) as usize;
    let h = (b - a) / n as f64;
    (0..n)
        .map(|i| (a + i as f64 * h, a + (i + 1) as f64 * h))
        .collect()
}

/// Marginal PFTN entropy of `objective` by one-dimensional quadrature of the
/// marginal density, for any L.
///
/// The density between consecutive cell bounds is `p_l(f) · D / Z` with a
/// segment-constant D; D and Z come from quadrature masses of the other
/// dimensions, and the entropy integral is numeric. None of the Theorem-2
/// slab algebra is used.
pub fn marginal_entropy_quadrature(
    pred: &PredictiveDistribution,
    partition: &CellPartition,
    objective: usize,
) -> f64 {
    let dims = partition.objectives();
    let l = objective;
    // Quadrature mass of every cell in every other dimension.
    let other_mass: Vec<f64> = partition
        .cells()
        .iter()
        .map(|cell| {
            (0..dims)
                .filter(|d| *d != l)
                .map(|d| {
                    let (a, b) = std_interval(cell, pred, d);
                    integrate(&|x| phi(x), a, b)
                })
                .product()
        })
        .collect();
    // Z from full products.
    let z: f64 = partition
        .cells()
        .iter()
        .zip(&other_mass)
        .map(|(cell, om)| {
            let (a, b) = std_interval(cell, pred, l);
            om * integrate(&|x| phi(x), a, b)
        })
        .sum();
    // Segment boundaries: distinct standardized cell bounds in dimension l.
    let mut bounds: Vec<f64> = Vec::new();
    for cell in partition.cells() {
        let (a, b) = std_interval(cell, pred, l);
        if a < b {
            bounds.push(a);
            bounds.push(b);
        }
    }
    bounds.sort_by(f64::total_cmp);
    bounds.dedup();
    let sigma_l = pred.stddev[l];
    let mut h = 0.0;
    for seg in bounds.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let mid = 0.5 * (a + b);
        // Segment-constant sum of other-dimension masses over the cells
        // whose l-interval covers this segment.
        let d: f64 = partition
            .cells()
            .iter()
            .zip(&other_mass)
            .filter(|(cell, _)| {
                let (lo, hi) = std_interval(cell, pred, l);
                lo <= mid && mid < hi
            })
            .map(|(_, om)| *om)
            .sum();
        if d <= 0.0 {
            continue;
        }
        // q(f) df in standardized coordinates: q = phi(x) d / (z sigma_l) per
        // unit f, and df = sigma_l dx.
        h += integrate(
            &|x| {
                let q = phi(x) * d / z;
                if q <= 0.0 {
                    0.0
                } else {
                    -q * (q.ln() - sigma_l.ln())
                }
            },
            a,
            b,
        );
    }
    h
}

/// Monte-Carlo estimate of the PFTN entropy with a delta-method standard
/// error accounting for the estimated normalizer.
pub fn pftn_entropy_mc<R: Rng + ?Sized>(
    pred: &PredictiveDistribution,
    frontier: &ParetoFrontier,
    samples: usize,
    rng: &mut R,
) -> (f64, f64) {
    let dims = pred.objectives();
    let mut sum_u = 0.0; // 1_dom * log p
    let mut sum_u2 = 0.0;
    let mut count = 0usize;
    let mut f = vec![0.0; dims];
    for _ in 0..samples {
        let mut logp = 0.0;
        for l in 0..dims {
            let zl: f64 = StandardNormal.sample(rng);
            f[l] = pred.mean[l] + pred.stddev[l] * zl;
            logp += log_phi(zl) - pred.stddev[l].ln();
        }
        if frontier.dominates_point(&f) {
            sum_u += logp;
            sum_u2 += logp * logp;
            count += 1;
        }
    }
    let n = samples as f64;
    let z_hat = count as f64 / n;
    let a_hat = sum_u / n;
    let h = -a_hat / z_hat + z_hat.ln();
    let var_a = (sum_u2 / n - a_hat * a_hat).max(0.0);
    let var_z = (z_hat * (1.0 - z_hat)).max(0.0);
    let cov = a_hat * (1.0 - z_hat);
    let g1 = -1.0 / z_hat;
    let g2 = a_hat / (z_hat * z_hat) + 1.0 / z_hat;
    let var_h = (g1 * g1 * var_a + 2.0 * g1 * g2 * cov + g2 * g2 * var_z) / n;
    (h, var_h.max(0.0).sqrt())
}

/// Monte-Carlo hypervolume above `reference` with its standard error.
pub fn hypervolume_mc<R: Rng + ?Sized>(
    frontier: &ParetoFrontier,
    reference: &[f64],
    samples: usize,
    rng: &mut R,
) -> (f64, f64) {
    let dims = reference.len();
    let mut upper = vec![f64::NEG_INFINITY; dims];
    for p in frontier.points() {
        for l in 0..dims {
            upper[l] = upper[l].max(p[l]);
        }
    }
    let mut vol_box = 1.0;
    for l in 0..dims {
        let side = upper[l] - reference[l];
        if side <= 0.0 {
            return (0.0, 0.0);
        }
        vol_box *= side;
    }
    let mut hits = 0usize;
    let mut f = vec![0.0; dims];
    for _ in 0..samples {
        for l in 0..dims {
            f[l] = rng.gen_range(reference[l]..upper[l]);
        }
        if frontier.dominates_point(&f) {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    let se = vol_box * (p * (1.0 - p) / samples as f64).sqrt();
    (vol_box * p, se)
}

/// O(n^2) pairwise nondominance filter with exact-duplicate merging.
pub fn brute_force_nondominated(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut uniq: Vec<Vec<f64>> = Vec::new();
    for p in points {
        if !uniq.contains(p) {
            uniq.push(p.clone());
        }
    }
    uniq.iter()
        .filter(|p| !uniq.iter().any(|q| *q != **p && dominates(q, p)))
        .cloned()
        .collect()
}

/// GP posterior by explicit dense inverse, mirroring the production
/// standardization but sharing no factorization code.
pub fn dense_gp_predict(
    data: &Dataset,
    kernel: &KernelConfig,
    x: &[f64],
) -> (Vec<f64>, Vec<f64>) {
    use nalgebra::{DMatrix, DVector};
    let mut means = Vec::new();
    let mut stds = Vec::new();
    for l in 0..data.objectives() {
        let rows = data.observed_rows(l);
        let xs: Vec<&[f64]> = rows.iter().map(|&i| data.inputs()[i].as_slice()).collect();
        let raw: Vec<f64> = rows.iter().map(|&i| data.outputs()[i][l]).collect();
        let n = rows.len();
        if n == 0 {
            means.push(0.0);
            stds.push(1.0);
            continue;
        }
        let (m0, s0) = if n < 2 {
            (0.0, 1.0)
        } else {
            let mean = raw.iter().sum::<f64>() / n as f64;
            let var = raw.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
            let s = var.sqrt();
            (mean, if s < 1e-12 { 1.0 } else { s })
        };
        let k = DMatrix::from_fn(n, n, |i, j| {
            gaussian_kernel(xs[i], xs[j], kernel.lengthscale)
                + if i == j { kernel.noise } else { 0.0 }
        });
        let inv = k.try_inverse().expect("oracle inverse");
        let y = DVector::from_iterator(n, raw.iter().map(|v| (v - m0) / s0));
        let kv = DVector::from_iterator(
            n,
            xs.iter().map(|xi| gaussian_kernel(x, xi, kernel.lengthscale)),
        );
        let mu = kv.dot(&(&inv * &y));
        let var = (1.0 - kv.dot(&(&inv * &kv))).max(0.0);
        means.push(m0 + s0 * mu);
        stds.push(s0 * var.sqrt());
    }
    (means, stds)
}
