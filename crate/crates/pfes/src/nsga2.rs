//! NSGA-II for maximizing a vector objective over a box, used both to solve
//! sampled surrogate functions and to estimate optimal hypervolumes on the
//! true benchmarks.
//!
//! Standard components: fast nondominated sorting, crowding distance,
//! binary tournament on (rank, crowding), simulated binary crossover and
//! polynomial mutation with the usual distribution indices.

use rand::Rng;

use crate::domain::BoxDomain;
use crate::pareto::{crowding_distances, dominates, ParetoFrontier};

#[derive(Debug, Clone)]
pub struct Nsga2Config {
    pub population: usize,
    pub generations: usize,
    /// SBX distribution index.
    pub crossover_eta: f64,
    pub crossover_prob: f64,
    /// Polynomial-mutation distribution index; per-variable rate is `1/d`.
    pub mutation_eta: f64,
    /// Returned frontier size cap.
    pub max_size: usize,
}

impl Default for Nsga2Config {
    fn default() -> Self {
        Self {
            population: 100,
            generations: 100,
            crossover_eta: 15.0,
            crossover_prob: 0.9,
            mutation_eta: 20.0,
            max_size: 50,
        }
    }
}

/// A solved point: decision vector and its objective values.
#[derive(Debug, Clone)]
pub struct SolvedPoint {
    pub x: Vec<f64>,
    pub f: Vec<f64>,
}

/// Run NSGA-II and return the nondominated subset of the final population,
/// deduplicated and truncated to `max_size` by crowding distance.
pub fn optimize<F, R>(
    objective: F,
    domain: &BoxDomain,
    cfg: &Nsga2Config,
    rng: &mut R,
) -> Vec<SolvedPoint>
where
    F: Fn(&[f64]) -> Vec<f64>,
    R: Rng + ?Sized,
{
    let d = domain.dims();
    let pop_size = cfg.population.max(2);
    let mut pop: Vec<SolvedPoint> = (0..pop_size)
        .map(|_| {
            let x = domain.sample_uniform(rng);
            let f = objective(&x);
            SolvedPoint { x, f }
        })
        .collect();
    let (mut ranks, mut crowd) = rank_and_crowd(&pop);

    let p_mut = 1.0 / d as f64;
    for _ in 0..cfg.generations {
        let mut offspring = Vec::with_capacity(pop_size);
        while offspring.len() < pop_size {
            let a = tournament(&ranks, &crowd, rng);
            let b = tournament(&ranks, &crowd, rng);
            let (mut c1, mut c2) = sbx(
                &pop[a].x,
                &pop[b].x,
                domain,
                cfg.crossover_eta,
                cfg.crossover_prob,
                rng,
            );
            mutate(&mut c1, domain, cfg.mutation_eta, p_mut, rng);
            mutate(&mut c2, domain, cfg.mutation_eta, p_mut, rng);
            let f1 = objective(&c1);
            offspring.push(SolvedPoint { x: c1, f: f1 });
            if offspring.len() < pop_size {
                let f2 = objective(&c2);
                offspring.push(SolvedPoint { x: c2, f: f2 });
            }
        }
        pop.extend(offspring);
        pop = environmental_selection(pop, pop_size);
        let rc = rank_and_crowd(&pop);
        ranks = rc.0;
        crowd = rc.1;
    }

    // Nondominated subset of the final population, deduplicated in objective
    // space, truncated by crowding.
    let front: Vec<usize> = (0..pop.len()).filter(|&i| ranks[i] == 0).collect();
    let mut points: Vec<SolvedPoint> = front.into_iter().map(|i| pop[i].clone()).collect();
    points.sort_by(|a, b| {
        for (x, y) in a.f.iter().zip(&b.f) {
            match y.total_cmp(x) {
                std::cmp::Ordering::Equal => continue,
                other => return other,
            }
        }
        std::cmp::Ordering::Equal
    });
    points.dedup_by(|a, b| a.f == b.f);
    if points.len() > cfg.max_size {
        let objs: Vec<Vec<f64>> = points.iter().map(|p| p.f.clone()).collect();
        let dist = crowding_distances(&objs);
        let mut idx: Vec<usize> = (0..points.len()).collect();
        idx.sort_by(|&a, &b| dist[b].total_cmp(&dist[a]).then(a.cmp(&b)));
        let mut keep: Vec<usize> = idx.into_iter().take(cfg.max_size).collect();
        keep.sort_unstable();
        points = keep.into_iter().map(|i| points[i].clone()).collect();
    }
    points
}

/// Frontier of objective vectors from a solved population.
pub fn frontier_of(points: &[SolvedPoint], max_size: usize) -> ParetoFrontier {
    ParetoFrontier::from_points(points.iter().map(|p| p.f.clone()).collect(), max_size)
        .expect("max_size >= 1")
}

fn rank_and_crowd(pop: &[SolvedPoint]) -> (Vec<usize>, Vec<f64>) {
    let fronts = fast_nondominated_sort(pop);
    let mut ranks = vec![0usize; pop.len()];
    let mut crowd = vec![0.0f64; pop.len()];
    for (r, front) in fronts.iter().enumerate() {
        let objs: Vec<Vec<f64>> = front.iter().map(|&i| pop[i].f.clone()).collect();
        let dist = crowding_distances(&objs);
        for (k, &i) in front.iter().enumerate() {
            ranks[i] = r;
            crowd[i] = dist[k];
        }
    }
    (ranks, crowd)
}

fn fast_nondominated_sort(pop: &[SolvedPoint]) -> Vec<Vec<usize>> {
    let n = pop.len();
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut count = vec![0usize; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            // Strict dominance: weak dominance plus inequality somewhere.
            if dominates(&pop[i].f, &pop[j].f) && pop[i].f != pop[j].f {
                dominated_by[i].push(j);
            } else if dominates(&pop[j].f, &pop[i].f) && pop[i].f != pop[j].f {
                count[i] += 1;
            }
        }
    }
    let mut fronts: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| count[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominated_by[i] {
                count[j] -= 1;
                if count[j] == 0 {
                    next.push(j);
                }
            }
        }
        fronts.push(std::mem::take(&mut current));
        current = next;
    }
    fronts
}

fn environmental_selection(pop: Vec<SolvedPoint>, target: usize) -> Vec<SolvedPoint> {
    let fronts = fast_nondominated_sort(&pop);
    let mut selected: Vec<usize> = Vec::with_capacity(target);
    for front in fronts {
        if selected.len() + front.len() <= target {
            selected.extend(front);
            if selected.len() == target {
                break;
            }
        } else {
            let objs: Vec<Vec<f64>> = front.iter().map(|&i| pop[i].f.clone()).collect();
            let dist = crowding_distances(&objs);
            let mut order: Vec<usize> = (0..front.len()).collect();
            order.sort_by(|&a, &b| dist[b].total_cmp(&dist[a]).then(front[a].cmp(&front[b])));
            for k in order.into_iter().take(target - selected.len()) {
                selected.push(front[k]);
            }
            break;
        }
    }
    selected.sort_unstable();
    let mut pop = pop;
    selected
        .into_iter()
        .map(|i| std::mem::replace(&mut pop[i], SolvedPoint { x: Vec::new(), f: Vec::new() }))
        .collect()
}

fn tournament<R: Rng + ?Sized>(ranks: &[usize], crowd: &[f64], rng: &mut R) -> usize {
    let n = ranks.len();
    let a = rng.gen_range(0..n);
    let b = rng.gen_range(0..n);
    if ranks[a] < ranks[b] || (ranks[a] == ranks[b] && crowd[a] > crowd[b]) {
        a
    } else {
        b
    }
}

fn sbx<R: Rng + ?Sized>(
    p1: &[f64],
    p2: &[f64],
    domain: &BoxDomain,
    eta: f64,
    prob: f64,
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    let mut c1 = p1.to_vec();
    let mut c2 = p2.to_vec();
    if rng.gen::<f64>() >= prob {
        return (c1, c2);
    }
    for i in 0..p1.len() {
        if rng.gen::<f64>() >= 0.5 || (p1[i] - p2[i]).abs() < 1e-14 {
            continue;
        }
        let u: f64 = rng.gen();
        let beta = if u <= 0.5 {
            (2.0 * u).powf(1.0 / (eta + 1.0))
        } else {
            (1.0 / (2.0 * (1.0 - u))).powf(1.0 / (eta + 1.0))
        };
        let (lo, hi) = (domain.lower()[i], domain.upper()[i]);
        let a = 0.5 * ((1.0 + beta) * p1[i] + (1.0 - beta) * p2[i]);
        let b = 0.5 * ((1.0 - beta) * p1[i] + (1.0 + beta) * p2[i]);
        c1[i] = a.clamp(lo, hi);
        c2[i] = b.clamp(lo, hi);
    }
    (c1, c2)
}

fn mutate<R: Rng + ?Sized>(
    x: &mut [f64],
    domain: &BoxDomain,
    eta: f64,
    p_mut: f64,
    rng: &mut R,
) {
    for i in 0..x.len() {
        if rng.gen::<f64>() >= p_mut {
            continue;
        }
        let (lo, hi) = (domain.lower()[i], domain.upper()[i]);
        let span = hi - lo;
        let d1 = (x[i] - lo) / span;
        let d2 = (hi - x[i]) / span;
        let u: f64 = rng.gen();
        let pow = 1.0 / (eta + 1.0);
        let dq = if u <= 0.5 {
            let b = 2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1).powf(eta + 1.0);
            b.powf(pow) - 1.0
        } else {
            let b = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2).powf(eta + 1.0);
            1.0 - b.powf(pow)
        };
        x[i] = (x[i] + dq * span).clamp(lo, hi);
    }
}
