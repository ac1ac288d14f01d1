//! Analytic entropy of the Pareto-frontier truncated normal (PFTN) and the
//! acquisition values built from it.
//!
//! For an independent Gaussian predictive distribution restricted to the
//! dominated region `F = ∪ C_m`, the entropy reduces to
//!
//! ```text
//! H = log((2πe)^{L/2} · Z · Π_l σ_l) + Σ_m (Z_m/Z) Σ_l Γ_ml,
//! Γ_ml = (α̲ φ(α̲) − ᾱ φ(ᾱ)) / (2 Z_ml),   Z_m = Π_l Z_ml,   Z = Σ_m Z_m,
//! ```
//!
//! with standardized cell bounds `α = (bound − μ_l)/σ_l`. The marginal
//! entropy of a single objective decomposes the same way over breakpoint
//! slabs and their `M(l,s)` cell index sets.
//!
//! Evaluation cost per candidate is O(S·L) CDF calls plus O(M·L) arithmetic:
//! all finite cell bounds are coordinates of the sampled frontier, so the
//! evaluators tabulate Φ/φ once per distinct bound per dimension and price
//! each cell from table lookups.

use crate::error::{PfesError, Result};
use crate::gp::PredictiveDistribution;
use crate::normal::{self, LN_SQRT_2PI_E};
use crate::partition::{CellPartition, MarginalBreakpoints};

/// Total-mass floor below which a candidate is declared uninformative for a
/// frontier (Theorem-style formulas are meaningless as Z → 0; the true
/// information contribution there is ~0).
pub const MASS_FLOOR_Z: f64 = 1e-12;

/// Cells or slabs with relative mass below this fraction of Z are skipped.
pub const CELL_MASS_FLOOR: f64 = 1e-14;

/// Entropy of the unrestricted Gaussian predictive: `Σ_l log(sqrt(2πe) σ_l)`.
pub fn gaussian_entropy(pred: &PredictiveDistribution) -> f64 {
    pred.stddev.iter().map(|s| LN_SQRT_2PI_E + s.ln()).sum()
}

/// Entropy of the marginal of objective `l`: `log(sqrt(2πe) σ_l)`.
pub fn gaussian_entropy_1d(pred: &PredictiveDistribution, objective: usize) -> f64 {
    LN_SQRT_2PI_E + pred.stddev[objective].ln()
}

// ---------------------------------------------------------------------------
// Per-cell statistics (reference construction)
// ---------------------------------------------------------------------------

/// Standardized bounds, masses, and Γ terms of every cell, plus the totals.
#[derive(Debug, Clone)]
pub struct TruncatedCellStats {
    /// `α̲_{m,l}`; `-inf` allowed.
    pub alpha_lower: Vec<Vec<f64>>,
    /// `ᾱ_{m,l}`.
    pub alpha_upper: Vec<Vec<f64>>,
    /// Per-dimension masses `Z_ml ∈ [0,1]`.
    pub mass: Vec<Vec<f64>>,
    /// Cell masses `Z_m = Π_l Z_ml`.
    pub cell_mass: Vec<f64>,
    /// `Γ_ml`; zero where the per-dimension mass vanishes.
    pub gamma: Vec<Vec<f64>>,
    /// `Z = Σ_m Z_m`.
    pub total_mass: f64,
    /// Cells with `Z_m < CELL_MASS_FLOOR · Z`, skippable in the entropy sum.
    pub skippable: Vec<bool>,
}

/// Straightforward per-cell construction of the Theorem-1 quantities.
pub fn cell_stats(pred: &PredictiveDistribution, partition: &CellPartition) -> TruncatedCellStats {
    let dims = partition.objectives();
    assert_eq!(pred.objectives(), dims, "pred/partition dimension mismatch");
    let m = partition.len();
    let mut alpha_lower = Vec::with_capacity(m);
    let mut alpha_upper = Vec::with_capacity(m);
    let mut mass = Vec::with_capacity(m);
    let mut gamma = Vec::with_capacity(m);
    let mut cell_mass = Vec::with_capacity(m);
    for cell in partition.cells() {
        let mut al = Vec::with_capacity(dims);
        let mut au = Vec::with_capacity(dims);
        let mut zm = Vec::with_capacity(dims);
        let mut gm = Vec::with_capacity(dims);
        let mut prod = 1.0;
        for l in 0..dims {
            let lo = (cell.lower()[l] - pred.mean[l]) / pred.stddev[l];
            let hi = (cell.upper()[l] - pred.mean[l]) / pred.stddev[l];
            let z = normal::mass(lo, hi);
            let g = if z > 0.0 {
                (normal::x_pdf(lo) - normal::x_pdf(hi)) / (2.0 * z)
            } else {
                0.0
            };
            al.push(lo);
            au.push(hi);
            zm.push(z);
            gm.push(g);
            prod *= z;
        }
        alpha_lower.push(al);
        alpha_upper.push(au);
        mass.push(zm);
        gamma.push(gm);
        cell_mass.push(prod);
    }
    let total_mass: f64 = cell_mass.iter().sum();
    let skippable = cell_mass
        .iter()
        .map(|z| *z < CELL_MASS_FLOOR * total_mass)
        .collect();
    TruncatedCellStats {
        alpha_lower,
        alpha_upper,
        mass,
        cell_mass,
        gamma,
        total_mass,
        skippable,
    }
}

// ---------------------------------------------------------------------------
// Indexed evaluators
// ---------------------------------------------------------------------------

/// Per-dimension Φ/φ tables at the distinct cell bounds of one partition.
struct BoundTables {
    /// Per dim: standardized α at each distinct bound value (ascending).
    alpha: Vec<Vec<f64>>,
    cdf: Vec<Vec<f64>>,
    ccdf: Vec<Vec<f64>>,
    xpdf: Vec<Vec<f64>>,
}

impl BoundTables {
    fn compute(values: &[Vec<f64>], pred: &PredictiveDistribution) -> Self {
        let dims = values.len();
        let mut alpha = Vec::with_capacity(dims);
        let mut cdf = Vec::with_capacity(dims);
        let mut ccdf = Vec::with_capacity(dims);
        let mut xpdf = Vec::with_capacity(dims);
        for l in 0..dims {
            let mu = pred.mean[l];
            let sd = pred.stddev[l];
            let a: Vec<f64> = values[l].iter().map(|v| (v - mu) / sd).collect();
            cdf.push(a.iter().map(|&x| normal::cdf(x)).collect());
            ccdf.push(a.iter().map(|&x| normal::ccdf(x)).collect());
            xpdf.push(a.iter().map(|&x| normal::x_pdf(x)).collect());
            alpha.push(a);
        }
        Self {
            alpha,
            cdf,
            ccdf,
            xpdf,
        }
    }

    /// Mass of `(v[lo], v[hi]]` in dimension `l`; `lo < 0` encodes `-inf`.
    #[inline]
    fn mass(&self, l: usize, lo: i32, hi: i32) -> f64 {
        let hi = hi as usize;
        if lo < 0 {
            return self.cdf[l][hi];
        }
        let lo = lo as usize;
        let m = if self.alpha[l][lo] >= 0.0 {
            self.ccdf[l][lo] - self.ccdf[l][hi]
        } else {
            self.cdf[l][hi] - self.cdf[l][lo]
        };
        m.max(0.0)
    }

    /// Numerator of Γ for `(v[lo], v[hi]]` in dimension `l`.
    #[inline]
    fn gamma_num(&self, l: usize, lo: i32, hi: i32) -> f64 {
        let lo_term = if lo < 0 { 0.0 } else { self.xpdf[l][lo as usize] };
        lo_term - self.xpdf[l][hi as usize]
    }
}

/// Maps a partition's cells onto per-dimension bound-value tables.
struct PartitionIndex {
    /// Sorted distinct finite bound values per dimension.
    values: Vec<Vec<f64>>,
    /// Per cell per dim `(lo, hi)` table indices; `lo = -1` encodes `-inf`.
    cells: Vec<Vec<(i32, i32)>>,
}

impl PartitionIndex {
    fn new(partition: &CellPartition) -> Self {
        let dims = partition.objectives();
        let mut values: Vec<Vec<f64>> = vec![Vec::new(); dims];
        for cell in partition.cells() {
            for l in 0..dims {
                if cell.lower()[l].is_finite() {
                    values[l].push(cell.lower()[l]);
                }
                values[l].push(cell.upper()[l]);
            }
        }
        for v in &mut values {
            v.sort_by(f64::total_cmp);
            v.dedup();
        }
        let lookup = |l: usize, v: f64| -> i32 {
            values[l]
                .binary_search_by(|w| w.total_cmp(&v))
                .expect("bound must be in table") as i32
        };
        let cells = partition
            .cells()
            .iter()
            .map(|cell| {
                (0..dims)
                    .map(|l| {
                        let lo = if cell.lower()[l].is_finite() {
                            lookup(l, cell.lower()[l])
                        } else {
                            -1
                        };
                        (lo, lookup(l, cell.upper()[l]))
                    })
                    .collect()
            })
            .collect();
        Self { values, cells }
    }
}

/// Reusable evaluator of the PFTN entropy for one partition.
pub struct PftnEvaluator {
    index: PartitionIndex,
    dims: usize,
}

impl PftnEvaluator {
    pub fn new(partition: &CellPartition) -> Self {
        Self {
            index: PartitionIndex::new(partition),
            dims: partition.objectives(),
        }
    }

    /// Total truncated mass Z at `pred`.
    pub fn total_mass(&self, pred: &PredictiveDistribution) -> f64 {
        let tables = BoundTables::compute(&self.index.values, pred);
        self.index
            .cells
            .iter()
            .map(|bounds| {
                bounds
                    .iter()
                    .enumerate()
                    .map(|(l, &(lo, hi))| tables.mass(l, lo, hi))
                    .product::<f64>()
            })
            .sum()
    }

    /// Theorem-1 entropy; `None` signals the degenerate-mass condition
    /// (`Z < MASS_FLOOR_Z`), in which case the caller should treat the
    /// candidate as uninformative for this frontier.
    pub fn entropy(&self, pred: &PredictiveDistribution) -> Option<f64> {
        assert_eq!(pred.objectives(), self.dims);
        let tables = BoundTables::compute(&self.index.values, pred);
        let ncells = self.index.cells.len();
        let mut cell_mass = vec![0.0f64; ncells];
        let mut z = 0.0;
        for (m, bounds) in self.index.cells.iter().enumerate() {
            let mut prod = 1.0;
            for (l, &(lo, hi)) in bounds.iter().enumerate() {
                prod *= tables.mass(l, lo, hi);
                if prod == 0.0 {
                    break;
                }
            }
            cell_mass[m] = prod;
            z += prod;
        }
        if z < MASS_FLOOR_Z {
            return None;
        }
        let mut correction = 0.0;
        for (m, bounds) in self.index.cells.iter().enumerate() {
            if cell_mass[m] < CELL_MASS_FLOOR * z {
                continue;
            }
            let mut gsum = 0.0;
            for (l, &(lo, hi)) in bounds.iter().enumerate() {
                let zml = tables.mass(l, lo, hi);
                gsum += tables.gamma_num(l, lo, hi) / (2.0 * zml);
            }
            correction += cell_mass[m] / z * gsum;
        }
        let log_sigma: f64 = pred.stddev.iter().map(|s| s.ln()).sum();
        Some(self.dims as f64 * LN_SQRT_2PI_E + z.ln() + log_sigma + correction)
    }
}

/// Theorem-1 PFTN entropy for one partition. `None` = degenerate mass.
pub fn pftn_entropy(pred: &PredictiveDistribution, partition: &CellPartition) -> Option<f64> {
    PftnEvaluator::new(partition).entropy(pred)
}

/// Coupled acquisition: Gaussian entropy minus the mean PFTN entropy over the
/// sampled frontiers; degenerate frontiers contribute zero gain.
pub fn pfes_acquisition(pred: &PredictiveDistribution, partitions: &[CellPartition]) -> f64 {
    assert!(!partitions.is_empty(), "need at least one sampled frontier");
    let evals: Vec<PftnEvaluator> = partitions.iter().map(PftnEvaluator::new).collect();
    pfes_acquisition_with(pred, &evals)
}

/// Hot-path variant over prebuilt evaluators.
pub fn pfes_acquisition_with(pred: &PredictiveDistribution, evals: &[PftnEvaluator]) -> f64 {
    assert!(!evals.is_empty(), "need at least one sampled frontier");
    let h = gaussian_entropy(pred);
    let gain_sum: f64 = evals
        .iter()
        .map(|e| e.entropy(pred).map_or(0.0, |ht| h - ht))
        .sum();
    gain_sum / evals.len() as f64
}

// ---------------------------------------------------------------------------
// Marginal (decoupled) entropy
// ---------------------------------------------------------------------------

/// Reusable evaluator of the marginal PFTN entropy for one refined partition
/// and its breakpoint structure.
pub struct MarginalEvaluator {
    index: PartitionIndex,
    /// Per slab: list of (cell index) in M(l,s).
    slab_cells: Vec<Vec<usize>>,
    /// Per slab: `(lo, hi)` indices of the slab interval in dim `objective`.
    slab_bounds: Vec<(i32, i32)>,
    objective: usize,
    dims: usize,
}

impl MarginalEvaluator {
    pub fn new(refined: &CellPartition, breakpoints: &MarginalBreakpoints) -> Result<Self> {
        let l = breakpoints.objective();
        if l >= refined.objectives() {
            return Err(PfesError::DimensionMismatch(
                "breakpoint objective out of range".into(),
            ));
        }
        let assigned: usize = (0..breakpoints.slab_count())
            .map(|s| breakpoints.cells_in_slab(s).len())
            .sum();
        if assigned != refined.len() {
            return Err(PfesError::InvalidInput(
                "breakpoints do not cover the refined partition".into(),
            ));
        }
        let index = PartitionIndex::new(refined);
        let lookup = |v: f64| -> Result<i32> {
            index.values[l]
                .binary_search_by(|w| w.total_cmp(&v))
                .map(|i| i as i32)
                .map_err(|_| PfesError::InvalidInput("slab bound missing from partition".into()))
        };
        let mut slab_bounds = Vec::with_capacity(breakpoints.slab_count());
        let mut slab_cells = Vec::with_capacity(breakpoints.slab_count());
        for s in 0..breakpoints.slab_count() {
            let (lo, hi) = breakpoints.slab_bounds(s);
            let lo_idx = if lo == f64::NEG_INFINITY { -1 } else { lookup(lo)? };
            slab_bounds.push((lo_idx, lookup(hi)?));
            slab_cells.push(breakpoints.cells_in_slab(s).to_vec());
        }
        Ok(Self {
            index,
            slab_cells,
            slab_bounds,
            objective: l,
            dims: refined.objectives(),
        })
    }

    pub fn objective(&self) -> usize {
        self.objective
    }

    /// Theorem-2 marginal entropy; `None` = degenerate mass.
    pub fn entropy(&self, pred: &PredictiveDistribution) -> Option<f64> {
        assert_eq!(pred.objectives(), self.dims);
        let tables = BoundTables::compute(&self.index.values, pred);
        let nslabs = self.slab_cells.len();
        let mut slab_mass = vec![0.0f64; nslabs];
        let mut z = 0.0;
        for (s, members) in self.slab_cells.iter().enumerate() {
            let mut w = 0.0;
            for &m in members {
                let mut prod = 1.0;
                for (l, &(lo, hi)) in self.index.cells[m].iter().enumerate() {
                    prod *= tables.mass(l, lo, hi);
                    if prod == 0.0 {
                        break;
                    }
                }
                w += prod;
            }
            slab_mass[s] = w;
            z += w;
        }
        if z < MASS_FLOOR_Z {
            return None;
        }
        let l = self.objective;
        let sigma_l = pred.stddev[l];
        let mut h = 0.0;
        for (s, &w) in slab_mass.iter().enumerate() {
            if w < CELL_MASS_FLOOR * z {
                continue;
            }
            let (lo, hi) = self.slab_bounds[s];
            let z_slab = tables.mass(l, lo, hi);
            let gamma = tables.gamma_num(l, lo, hi) / (2.0 * z_slab);
            let log_term = (w / z).ln() - LN_SQRT_2PI_E - sigma_l.ln() - z_slab.ln();
            h -= w / z * (log_term - gamma);
        }
        Some(h)
    }
}

/// Theorem-2 marginal entropy of objective `breakpoints.objective()`.
pub fn marginal_pftn_entropy(
    pred: &PredictiveDistribution,
    refined: &CellPartition,
    breakpoints: &MarginalBreakpoints,
) -> Result<Option<f64>> {
    Ok(MarginalEvaluator::new(refined, breakpoints)?.entropy(pred))
}

/// Cost-sensitive decoupled acquisition for objective `l`:
/// `(1/λ_l) (H[p(f^l|D)] − mean_frontier H[p(f^l | D, f ⪯ F*)])`.
pub fn decoupled_acquisition(
    pred: &PredictiveDistribution,
    refined: &[(CellPartition, MarginalBreakpoints)],
    objective: usize,
    costs: &[f64],
) -> Result<f64> {
    assert!(!refined.is_empty(), "need at least one sampled frontier");
    let evals = refined
        .iter()
        .map(|(p, b)| {
            if b.objective() != objective {
                return Err(PfesError::InvalidInput(
                    "breakpoints refined for a different objective".into(),
                ));
            }
            MarginalEvaluator::new(p, b)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(decoupled_acquisition_with(pred, &evals, objective, costs))
}

/// Hot-path variant over prebuilt marginal evaluators for objective `l`.
pub fn decoupled_acquisition_with(
    pred: &PredictiveDistribution,
    evals: &[MarginalEvaluator],
    objective: usize,
    costs: &[f64],
) -> f64 {
    let lambda = costs[objective];
    assert!(lambda > 0.0, "costs must be positive");
    let h = gaussian_entropy_1d(pred, objective);
    let gain_sum: f64 = evals
        .iter()
        .map(|e| e.entropy(pred).map_or(0.0, |ht| h - ht))
        .sum();
    gain_sum / evals.len() as f64 / lambda
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nondominated_filter;
    use crate::partition::{partition_2d, partition_qhv, refine_for_marginal, Cell, CellPartition};
    use approx::assert_abs_diff_eq;

    fn pred(mean: &[f64], stddev: &[f64]) -> PredictiveDistribution {
        PredictiveDistribution::new(mean.to_vec(), stddev.to_vec())
    }

    fn quadrant_partition() -> CellPartition {
        let f = nondominated_filter(&[vec![0.0, 0.0]]).unwrap();
        partition_2d(&f).unwrap()
    }

    #[test]
    fn gaussian_entropy_reference_values() {
        assert_abs_diff_eq!(
            gaussian_entropy(&pred(&[0.0], &[1.0])),
            1.418_938_533_204_672_7,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            gaussian_entropy(&pred(&[3.0], &[2.0])),
            2.112_085_713_764_618,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            gaussian_entropy(&pred(&[0.0, 0.0, 0.0], &[1.0, 1.0, 1.0])),
            4.256_815_599_614_018,
            epsilon = 1e-9
        );
    }

    #[test]
    fn cell_stats_standard_normal_unit_cell() {
        // 1D-like cell (0,1] x (-inf, inf) under a standard normal.
        let f = nondominated_filter(&[vec![1.0, 1e6]]).unwrap();
        let cells = vec![Cell::new(vec![0.0, f64::NEG_INFINITY], vec![1.0, 1e6])];
        let p = CellPartition::from_cells(cells, f).unwrap();
        let stats = cell_stats(&pred(&[0.0, 0.0], &[1.0, 1.0]), &p);
        assert_abs_diff_eq!(stats.mass[0][0], 0.341_344_746_068_543, epsilon = 1e-12);
        assert_abs_diff_eq!(stats.gamma[0][0], -0.354_437_452_613_603_4, epsilon = 1e-12);
        // Second dimension is effectively untruncated.
        assert_abs_diff_eq!(stats.mass[0][1], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(stats.gamma[0][1], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn quadrant_mass_is_quarter() {
        let p = quadrant_partition();
        let stats = cell_stats(&pred(&[0.0, 0.0], &[1.0, 1.0]), &p);
        assert_abs_diff_eq!(stats.total_mass, 0.25, epsilon = 1e-12);
    }

    #[test]
    fn untruncated_entropy_equals_gaussian() {
        // A single huge cell is numerically untruncated.
        let f = nondominated_filter(&[vec![1e9, 1e9, 1e9]]).unwrap();
        let p = partition_qhv(&f).unwrap();
        let pd = pred(&[0.3, -0.7, 2.0], &[0.5, 1.5, 3.0]);
        let h = pftn_entropy(&pd, &p).unwrap();
        assert_abs_diff_eq!(h, gaussian_entropy(&pd), epsilon = 1e-9);
    }

    #[test]
    fn quadrant_entropy_is_twice_half_normal() {
        let p = quadrant_partition();
        let h = pftn_entropy(&pred(&[0.0, 0.0], &[1.0, 1.0]), &p).unwrap();
        assert_abs_diff_eq!(h, 1.451_582_705_289_454_9, epsilon = 1e-10);
    }

    #[test]
    fn evaluator_matches_cell_stats_formula() {
        // Same Theorem-1 value along the indexed path and the direct path.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..20 {
            let pts: Vec<Vec<f64>> = (0..12)
                .map(|_| (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect())
                .collect();
            let f = nondominated_filter(&pts).unwrap();
            let p = partition_qhv(&f).unwrap();
            let pd = pred(
                &[rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)],
                &[rng.gen_range(0.2..1.5), rng.gen_range(0.2..1.5), rng.gen_range(0.2..1.5)],
            );
            let stats = cell_stats(&pd, &p);
            if stats.total_mass < MASS_FLOOR_Z {
                continue;
            }
            let mut direct = 3.0 * LN_SQRT_2PI_E
                + stats.total_mass.ln()
                + pd.stddev.iter().map(|s| s.ln()).sum::<f64>();
            for m in 0..p.len() {
                if stats.skippable[m] {
                    continue;
                }
                direct += stats.cell_mass[m] / stats.total_mass
                    * stats.gamma[m].iter().sum::<f64>();
            }
            let h = pftn_entropy(&pd, &p).unwrap();
            assert_abs_diff_eq!(h, direct, epsilon = 1e-10);
        }
    }

    #[test]
    fn acquisition_full_space_is_zero() {
        let f = nondominated_filter(&[vec![1e9, 1e9]]).unwrap();
        let p = partition_2d(&f).unwrap();
        let pd = pred(&[0.0, 0.0], &[1.0, 1.0]);
        let a = pfes_acquisition(&pd, &[p.clone(), p]);
        assert_abs_diff_eq!(a, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn acquisition_quadrant_is_minus_log_mass() {
        let p = quadrant_partition();
        let pd = pred(&[0.0, 0.0], &[1.0, 1.0]);
        let a = pfes_acquisition(&pd, &[p]);
        assert_abs_diff_eq!(a, 1.386_294_361_119_890_6, epsilon = 1e-9);
        assert_abs_diff_eq!(
            2.837_877_066_409_345 - 1.451_582_705_289_454_9,
            1.386_294_361_119_890_6,
            epsilon = 1e-12
        );
    }

    #[test]
    fn acquisition_invariant_to_cell_split() {
        // Presenting the quadrant as one cell or two sub-cells is identical.
        let f = nondominated_filter(&[vec![0.0, 0.0]]).unwrap();
        let neg = f64::NEG_INFINITY;
        let one = CellPartition::from_cells(
            vec![Cell::new(vec![neg, neg], vec![0.0, 0.0])],
            f.clone(),
        )
        .unwrap();
        let two = CellPartition::from_cells(
            vec![
                Cell::new(vec![neg, neg], vec![-1.0, 0.0]),
                Cell::new(vec![-1.0, neg], vec![0.0, 0.0]),
            ],
            f,
        )
        .unwrap();
        let pd = pred(&[0.4, -0.2], &[0.8, 1.3]);
        let a1 = pfes_acquisition(&pd, &[one]);
        let a2 = pfes_acquisition(&pd, &[two]);
        assert_abs_diff_eq!(a1, a2, epsilon = 1e-10);
    }

    #[test]
    fn degenerate_mass_signalled() {
        let p = quadrant_partition();
        // Predictive far above the dominated quadrant: essentially no mass.
        let pd = pred(&[20.0, 20.0], &[0.5, 0.5]);
        assert!(pftn_entropy(&pd, &p).is_none());
        assert_abs_diff_eq!(pfes_acquisition(&pd, &[p]), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn marginal_quadrant_is_half_normal_entropy() {
        let p = quadrant_partition();
        let (refined, bp) = refine_for_marginal(&p, 0);
        let pd = pred(&[0.0, 0.0], &[1.0, 1.0]);
        let h = marginal_pftn_entropy(&pd, &refined, &bp).unwrap().unwrap();
        assert_abs_diff_eq!(h, 0.725_791_352_644_727_4, epsilon = 1e-10);
    }

    #[test]
    fn marginal_single_full_slab_is_gaussian_1d() {
        let f = nondominated_filter(&[vec![1e9, 1e9]]).unwrap();
        let p = partition_2d(&f).unwrap();
        let (refined, bp) = refine_for_marginal(&p, 1);
        let pd = pred(&[0.5, -1.0], &[0.7, 2.2]);
        let h = marginal_pftn_entropy(&pd, &refined, &bp).unwrap().unwrap();
        assert_abs_diff_eq!(h, gaussian_entropy_1d(&pd, 1), epsilon = 1e-9);
    }

    #[test]
    fn decoupled_scaling_laws() {
        let p = quadrant_partition();
        let (refined, bp) = refine_for_marginal(&p, 0);
        let pd = pred(&[0.0, 0.0], &[1.0, 1.0]);
        let pair = vec![(refined, bp)];
        let a1 = decoupled_acquisition(&pd, &pair, 0, &[1.0, 1.0]).unwrap();
        let a2 = decoupled_acquisition(&pd, &pair, 0, &[2.0, 1.0]).unwrap();
        assert_abs_diff_eq!(a1, 0.693_147_180_559_945_3, epsilon = 1e-9);
        assert_abs_diff_eq!(a1, 2.0 * a2, epsilon = 1e-12);
    }

    #[test]
    fn mass_conservation_between_views() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(33);
        for _ in 0..10 {
            let pts: Vec<Vec<f64>> = (0..15)
                .map(|_| (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect())
                .collect();
            let f = nondominated_filter(&pts).unwrap();
            let p = partition_qhv(&f).unwrap();
            let pd = pred(
                &[0.1, -0.2, 0.3],
                &[0.9, 1.1, 0.7],
            );
            let z = cell_stats(&pd, &p).total_mass;
            for l in 0..3 {
                let (refined, _) = refine_for_marginal(&p, l);
                let zr = cell_stats(&pd, &refined).total_mass;
                assert_abs_diff_eq!(z, zr, epsilon = 1e-12);
            }
        }
    }
}
