//! Cell partitions of the dominated region.
//!
//! The region dominated by a sampled frontier is downward-closed and unbounded
//! below, so cells carry explicit `-inf` lower bounds. Two constructions are
//! provided: the two-objective staircase with exactly `|F*|` cells, and a
//! quick-hypervolume style divide-and-conquer that keeps the cell count far
//! below the naive `|F*|^L` grid for three or more objectives. Both tile the
//! same region; only the cell shapes differ.

use crate::error::{PfesError, Result};
use crate::pareto::{dominates, ParetoFrontier};

/// Half-open hyper-rectangle `(lower_1, upper_1] x ... x (lower_L, upper_L]`.
///
/// Lower bounds may be `-inf`; upper bounds are finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Cell {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        assert_eq!(lower.len(), upper.len());
        for (l, u) in lower.iter().zip(&upper) {
            assert!(u.is_finite(), "cell upper bounds must be finite");
            assert!(l < u, "cell needs lower < upper, got ({l}, {u}]");
        }
        Self { lower, upper }
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn objectives(&self) -> usize {
        self.lower.len()
    }

    /// Membership in the half-open box.
    pub fn contains(&self, f: &[f64]) -> bool {
        f.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(v, (l, u))| *v > *l && *v <= *u)
    }

    /// Volume of the intersection with `[reference, inf)`.
    pub fn clipped_volume(&self, reference: &[f64]) -> f64 {
        let mut vol = 1.0;
        for ((l, u), r) in self.lower.iter().zip(&self.upper).zip(reference) {
            let side = u - l.max(*r);
            if side <= 0.0 {
                return 0.0;
            }
            vol *= side;
        }
        vol
    }
}

/// A disjoint set of cells whose union is the region dominated by `frontier`.
#[derive(Debug, Clone)]
pub struct CellPartition {
    cells: Vec<Cell>,
    frontier: ParetoFrontier,
}

impl CellPartition {
    /// Build from pre-constructed cells. The caller is responsible for the
    /// disjoint-union invariant; this is exercised directly by tests.
    pub fn from_cells(cells: Vec<Cell>, frontier: ParetoFrontier) -> Result<Self> {
        if cells.is_empty() {
            return Err(PfesError::InvalidInput("partition needs at least one cell".into()));
        }
        let dims = frontier.objectives();
        if cells.iter().any(|c| c.objectives() != dims) {
            return Err(PfesError::DimensionMismatch(
                "cell dimensionality differs from frontier".into(),
            ));
        }
        Ok(Self { cells, frontier })
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn frontier(&self) -> &ParetoFrontier {
        &self.frontier
    }

    pub fn objectives(&self) -> usize {
        self.frontier.objectives()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// True iff some cell contains `f`.
    pub fn contains(&self, f: &[f64]) -> bool {
        self.cells.iter().any(|c| c.contains(f))
    }

    /// Number of cells containing `f`; must be 0 or 1 for a valid partition.
    pub fn membership_count(&self, f: &[f64]) -> usize {
        self.cells.iter().filter(|c| c.contains(f)).count()
    }
}

/// Staircase partition for two objectives: exactly `|F*|` cells.
pub fn partition_2d(frontier: &ParetoFrontier) -> Result<CellPartition> {
    if frontier.objectives() != 2 {
        return Err(PfesError::DimensionMismatch(format!(
            "partition_2d needs L=2, got L={}",
            frontier.objectives()
        )));
    }
    let mut pts = frontier.points().to_vec();
    // Nondominated distinct points have strictly increasing f1 and strictly
    // decreasing f2 once sorted.
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]));
    let neg = f64::NEG_INFINITY;
    let mut cells = Vec::with_capacity(pts.len());
    for (i, p) in pts.iter().enumerate() {
        let left = if i == 0 { neg } else { pts[i - 1][0] };
        cells.push(Cell::new(vec![left, neg], vec![p[0], p[1]]));
    }
    CellPartition::from_cells(cells, frontier.clone())
}

/// Divide-and-conquer partition in the style of quick hypervolume.
///
/// Pivot is the point with the largest product of margins to the working
/// reference corner (ties to the lowest index). The pivot's dominated box is
/// emitted as a cell and the `2^L - 2` possibly nonempty complementary
/// sub-boxes are recursed into with the frontier clipped accordingly. Cells
/// whose lower face lies on the global working corner are extended to `-inf`
/// afterwards, which is exact because the dominated region is downward closed.
pub fn partition_qhv(frontier: &ParetoFrontier) -> Result<CellPartition> {
    if frontier.is_empty() {
        return Err(PfesError::InvalidInput("cannot partition an empty frontier".into()));
    }
    let dims = frontier.objectives();
    if dims < 2 {
        return Err(PfesError::DimensionMismatch("partition_qhv needs L >= 2".into()));
    }
    let pts = frontier.points();
    // A finite working corner strictly below every frontier coordinate.
    let mut corner = vec![0.0; dims];
    let mut top = vec![0.0; dims];
    for l in 0..dims {
        let min = pts.iter().map(|p| p[l]).fold(f64::INFINITY, f64::min);
        let max = pts.iter().map(|p| p[l]).fold(f64::NEG_INFINITY, f64::max);
        corner[l] = min - 1.0 - 0.05 * (max - min);
        top[l] = max;
    }
    let mut cells = Vec::new();
    qhv_recurse(pts.to_vec(), &corner, &top, &mut cells);
    for cell in &mut cells {
        for l in 0..dims {
            if cell.lower[l] == corner[l] {
                cell.lower[l] = f64::NEG_INFINITY;
            }
        }
    }
    CellPartition::from_cells(cells, frontier.clone())
}

fn qhv_recurse(points: Vec<Vec<f64>>, corner: &[f64], top: &[f64], cells: &mut Vec<Cell>) {
    let dims = corner.len();
    match points.len() {
        0 => return,
        1 => {
            cells.push(Cell::new(corner.to_vec(), points.into_iter().next().unwrap()));
            return;
        }
        _ => {}
    }
    let pivot_idx = points
        .iter()
        .enumerate()
        .max_by(|(i, p), (j, q)| {
            let vp: f64 = p.iter().zip(corner).map(|(a, c)| a - c).product();
            let vq: f64 = q.iter().zip(corner).map(|(a, c)| a - c).product();
            vp.total_cmp(&vq).then(j.cmp(i))
        })
        .map(|(i, _)| i)
        .unwrap();
    let pivot = points[pivot_idx].clone();
    cells.push(Cell::new(corner.to_vec(), pivot.clone()));

    // Complementary sub-boxes indexed by bitmask: bit set means the interval
    // above the pivot in that dimension. All-zero is the pivot box, all-one
    // cannot intersect the dominated region.
    for mask in 1..((1usize << dims) - 1) {
        let mut sub_corner = vec![0.0; dims];
        let mut sub_top = vec![0.0; dims];
        let mut empty = false;
        for l in 0..dims {
            if mask & (1 << l) != 0 {
                sub_corner[l] = pivot[l];
                sub_top[l] = top[l];
            } else {
                sub_corner[l] = corner[l];
                sub_top[l] = pivot[l];
            }
            if sub_top[l] <= sub_corner[l] {
                empty = true;
                break;
            }
        }
        if empty {
            continue;
        }
        let mut clipped: Vec<Vec<f64>> = Vec::new();
        'outer: for p in &points {
            let mut q = vec![0.0; dims];
            for l in 0..dims {
                q[l] = p[l].min(sub_top[l]);
                if q[l] <= sub_corner[l] {
                    continue 'outer;
                }
            }
            if !clipped.iter().any(|r| dominates(r, &q)) {
                clipped.retain(|r| !dominates(&q, r));
                clipped.push(q);
            }
        }
        qhv_recurse(clipped, &sub_corner, &sub_top, cells);
    }
}

/// Exact dominated hypervolume above `reference`.
///
/// Sums the partition's cell volumes clipped to the reference box; zero when
/// no frontier point strictly dominates the reference.
pub fn hypervolume(frontier: &ParetoFrontier, reference: &[f64]) -> f64 {
    if frontier.is_empty() {
        return 0.0;
    }
    assert_eq!(frontier.objectives(), reference.len());
    let partition = if frontier.objectives() == 2 {
        partition_2d(frontier)
    } else {
        partition_qhv(frontier)
    }
    .expect("frontier checked nonempty");
    partition
        .cells()
        .iter()
        .map(|c| c.clipped_volume(reference))
        .sum()
}

/// Breakpoints of one objective and the slab index sets `M(l,s)`.
///
/// `values` holds the sorted distinct finite breakpoints; slab `s` covers
/// `(values[s-1], values[s]]` with the implicit `values[-1] = -inf`, so there
/// are `values.len()` slabs. `slab_cells[s]` lists the refined-partition cell
/// indices whose interval in this objective equals slab `s`.
#[derive(Debug, Clone)]
pub struct MarginalBreakpoints {
    objective: usize,
    values: Vec<f64>,
    slab_cells: Vec<Vec<usize>>,
}

impl MarginalBreakpoints {
    pub fn objective(&self) -> usize {
        self.objective
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn slab_count(&self) -> usize {
        self.values.len()
    }

    /// The index set M(l,s).
    pub fn cells_in_slab(&self, s: usize) -> &[usize] {
        &self.slab_cells[s]
    }

    /// Slab bounds `(lower, upper]`, lower being `-inf` for slab 0.
    pub fn slab_bounds(&self, s: usize) -> (f64, f64) {
        let lo = if s == 0 { f64::NEG_INFINITY } else { self.values[s - 1] };
        (lo, self.values[s])
    }
}

/// Split every cell along objective `l` so each refined cell's interval in
/// that dimension equals one breakpoint slab, and report the `M(l,s)` sets.
///
/// Breakpoints are the distinct frontier coordinates in dimension `l` merged
/// with any finite cell bounds in that dimension (the latter only matters for
/// hand-built partitions; QHV and staircase bounds are frontier coordinates).
pub fn refine_for_marginal(
    partition: &CellPartition,
    objective: usize,
) -> (CellPartition, MarginalBreakpoints) {
    let l = objective;
    assert!(l < partition.objectives(), "objective index out of range");
    let mut values: Vec<f64> = partition
        .frontier()
        .points()
        .iter()
        .map(|p| p[l])
        .chain(partition.cells().iter().map(|c| c.upper[l]))
        .chain(
            partition
                .cells()
                .iter()
                .map(|c| c.lower[l])
                .filter(|v| v.is_finite()),
        )
        .collect();
    values.sort_by(f64::total_cmp);
    values.dedup();

    let slab_count = values.len();
    let mut cells = Vec::with_capacity(partition.len());
    let mut slab_cells = vec![Vec::new(); slab_count];
    for cell in partition.cells() {
        // First slab whose interval lies inside the cell, and the last one.
        let start = if cell.lower[l] == f64::NEG_INFINITY {
            0
        } else {
            values.binary_search_by(|v| v.total_cmp(&cell.lower[l])).expect(
                "cell lower bound missing from breakpoint set",
            ) + 1
        };
        let end = values
            .binary_search_by(|v| v.total_cmp(&cell.upper[l]))
            .expect("cell upper bound missing from breakpoint set");
        for s in start..=end {
            let mut lower = cell.lower.clone();
            let mut upper = cell.upper.clone();
            lower[l] = if s == 0 { f64::NEG_INFINITY } else { values[s - 1] };
            upper[l] = values[s];
            slab_cells[s].push(cells.len());
            cells.push(Cell::new(lower, upper));
        }
    }
    let refined = CellPartition::from_cells(cells, partition.frontier().clone())
        .expect("refinement preserves cell validity");
    (
        refined,
        MarginalBreakpoints {
            objective: l,
            values,
            slab_cells,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pareto::nondominated_filter;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn frontier(points: &[&[f64]]) -> ParetoFrontier {
        nondominated_filter(&points.iter().map(|p| p.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn random_frontier(rng: &mut ChaCha8Rng, dims: usize, n: usize) -> ParetoFrontier {
        let pts: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..dims).map(|_| rng.gen_range(-1.0..1.0)).collect())
            .collect();
        nondominated_filter(&pts).unwrap()
    }

    #[test]
    fn staircase_two_points() {
        let f = frontier(&[&[1.0, 2.0], &[2.0, 1.0]]);
        let p = partition_2d(&f).unwrap();
        assert_eq!(p.len(), 2);
        let neg = f64::NEG_INFINITY;
        assert_eq!(p.cells()[0], Cell::new(vec![neg, neg], vec![1.0, 2.0]));
        assert_eq!(p.cells()[1], Cell::new(vec![1.0, neg], vec![2.0, 1.0]));
    }

    #[test]
    fn staircase_single_point() {
        let f = frontier(&[&[0.0, 0.0]]);
        let p = partition_2d(&f).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p.contains(&[-3.0, -100.0]));
        assert!(!p.contains(&[0.1, -1.0]));
    }

    #[test]
    fn staircase_rejects_other_dims() {
        let f = frontier(&[&[0.0, 0.0, 0.0]]);
        assert!(partition_2d(&f).is_err());
    }

    #[test]
    fn qhv_single_point_is_semi_infinite_box() {
        let f = frontier(&[&[1.0, 1.0, 1.0]]);
        let p = partition_qhv(&f).unwrap();
        assert_eq!(p.len(), 1);
        let c = &p.cells()[0];
        assert!(c.lower().iter().all(|v| *v == f64::NEG_INFINITY));
        assert_eq!(c.upper(), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn qhv_rejects_empty() {
        let f = nondominated_filter(&[]).unwrap();
        assert!(partition_qhv(&f).is_err());
    }

    #[test]
    fn membership_matches_dominance_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for dims in 2..=4 {
            for _ in 0..8 {
                let f = random_frontier(&mut rng, dims, 50);
                let p = partition_qhv(&f).unwrap();
                for _ in 0..2_000 {
                    let probe: Vec<f64> =
                        (0..dims).map(|_| rng.gen_range(-1.6..1.2)).collect();
                    let count = p.membership_count(&probe);
                    assert!(count <= 1, "probe in {count} cells");
                    assert_eq!(count == 1, f.dominates_point(&probe));
                }
            }
        }
    }

    #[test]
    fn staircase_membership_matches_dominance_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = random_frontier(&mut rng, 2, 50);
        let p = partition_2d(&f).unwrap();
        assert_eq!(p.len(), f.len());
        for _ in 0..10_000 {
            let probe: Vec<f64> = (0..2).map(|_| rng.gen_range(-1.6..1.2)).collect();
            let count = p.membership_count(&probe);
            assert!(count <= 1);
            assert_eq!(count == 1, f.dominates_point(&probe));
        }
    }

    #[test]
    fn hypervolume_examples() {
        let f = frontier(&[&[1.0, 2.0], &[2.0, 1.0]]);
        assert!((hypervolume(&f, &[0.0, 0.0]) - 3.0).abs() < 1e-12);
        // Reference not dominated by any point.
        assert_eq!(hypervolume(&f, &[5.0, 5.0]), 0.0);
    }

    #[test]
    fn hypervolume_is_partition_invariant_for_l2() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_frontier(&mut rng, 2, 30);
        let reference = vec![-1.5, -1.5];
        let via_2d: f64 = partition_2d(&f)
            .unwrap()
            .cells()
            .iter()
            .map(|c| c.clipped_volume(&reference))
            .sum();
        let via_qhv: f64 = partition_qhv(&f)
            .unwrap()
            .cells()
            .iter()
            .map(|c| c.clipped_volume(&reference))
            .sum();
        assert!((via_2d - via_qhv).abs() < 1e-10 * via_2d.max(1.0));
    }

    #[test]
    fn refine_matches_slab_structure() {
        // Three cells hand-built so two share the first slab of objective 1:
        // the configuration with M(1,0) = {cells 0,1} and M(1,1) = {cell 2}.
        let f = frontier(&[&[1.0, 3.0], &[2.0, 1.0]]);
        let neg = f64::NEG_INFINITY;
        let cells = vec![
            Cell::new(vec![neg, neg], vec![1.0, 1.0]),
            Cell::new(vec![neg, 1.0], vec![1.0, 3.0]),
            Cell::new(vec![1.0, neg], vec![2.0, 1.0]),
        ];
        let p = CellPartition::from_cells(cells, f).unwrap();
        let (refined, bp) = refine_for_marginal(&p, 0);
        assert_eq!(refined.len(), 3, "already aligned in objective 0");
        assert_eq!(bp.slab_count(), 2);
        assert_eq!(bp.cells_in_slab(0), &[0, 1]);
        assert_eq!(bp.cells_in_slab(1), &[2]);
        assert_eq!(bp.slab_bounds(0), (neg, 1.0));
        assert_eq!(bp.slab_bounds(1), (1.0, 2.0));
    }

    #[test]
    fn staircase_already_aligned_in_first_objective() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = random_frontier(&mut rng, 2, 20);
        let p = partition_2d(&f).unwrap();
        let (refined, _) = refine_for_marginal(&p, 0);
        assert_eq!(refined.len(), p.len());
    }

    #[test]
    fn refinement_preserves_membership() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let f = random_frontier(&mut rng, 3, 30);
        let p = partition_qhv(&f).unwrap();
        for l in 0..3 {
            let (refined, bp) = refine_for_marginal(&p, l);
            // Every refined cell belongs to exactly one slab.
            let assigned: usize = (0..bp.slab_count()).map(|s| bp.cells_in_slab(s).len()).sum();
            assert_eq!(assigned, refined.len());
            assert!(refined.len() <= p.len() * (f.len() + 1));
            for _ in 0..2_000 {
                let probe: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.6..1.2)).collect();
                assert_eq!(
                    refined.membership_count(&probe),
                    p.membership_count(&probe)
                );
            }
            // Slab intervals match the refined cells they index.
            for s in 0..bp.slab_count() {
                let (lo, hi) = bp.slab_bounds(s);
                for &m in bp.cells_in_slab(s) {
                    assert_eq!(refined.cells()[m].lower()[l], lo);
                    assert_eq!(refined.cells()[m].upper()[l], hi);
                }
            }
        }
    }

    #[test]
    fn qhv_cell_count_stays_moderate() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = random_frontier(&mut rng, 4, 120);
        let p = partition_qhv(&f).unwrap();
        // Frontier of ~50 points in 4D: far below the naive |F*|^4 grid.
        assert!(p.len() < 20_000, "cell count {}", p.len());
    }
}
