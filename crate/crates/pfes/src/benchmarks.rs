//! Benchmark objective functions, reference points, and the relative
//! hypervolume metric.
//!
//! Every objective is maximized internally; benchmarks published as
//! minimization problems are negated inside `evaluate`, so all downstream
//! code (GP, frontiers, hypervolumes) sees one orientation.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::domain::BoxDomain;
use crate::error::{PfesError, Result};
use crate::nsga2::{self, Nsga2Config};
use crate::pareto::nondominated_filter;
use crate::partition::hypervolume;
use crate::pool::CandidatePool;

/// Fixed stream for reference-point and optimal-hypervolume estimation so
/// those constants are identical across experiment seeds.
const CALIBRATION_SEED: u64 = 0x5EED_CA1B;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchmarkKind {
    AckleySphere,
    Zdt4,
    Dtlz3,
    Dtlz4,
}

/// A continuous benchmark with its published dimensions and domain.
#[derive(Debug, Clone)]
pub struct Benchmark {
    kind: BenchmarkKind,
    domain: BoxDomain,
    objectives: usize,
}

impl Benchmark {
    pub fn new(kind: BenchmarkKind) -> Self {
        let (domain, objectives) = match kind {
            BenchmarkKind::AckleySphere => {
                (BoxDomain::new(vec![-5.0; 2], vec![5.0; 2]).unwrap(), 2)
            }
            BenchmarkKind::Zdt4 => {
                let mut lower = vec![0.0];
                let mut upper = vec![1.0];
                lower.extend(vec![-5.0; 3]);
                upper.extend(vec![5.0; 3]);
                (BoxDomain::new(lower, upper).unwrap(), 2)
            }
            BenchmarkKind::Dtlz3 | BenchmarkKind::Dtlz4 => {
                (BoxDomain::new(vec![0.0; 6], vec![1.0; 6]).unwrap(), 4)
            }
        };
        Self {
            kind,
            domain,
            objectives,
        }
    }

    pub fn kind(&self) -> BenchmarkKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            BenchmarkKind::AckleySphere => "ackley-sphere",
            BenchmarkKind::Zdt4 => "zdt4",
            BenchmarkKind::Dtlz3 => "dtlz3",
            BenchmarkKind::Dtlz4 => "dtlz4",
        }
    }

    pub fn dims(&self) -> usize {
        self.domain.dims()
    }

    pub fn objectives(&self) -> usize {
        self.objectives
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    /// Maximization-oriented objective vector; rejects out-of-domain inputs.
    pub fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>> {
        if !self.domain.contains(x) {
            return Err(PfesError::InvalidInput(format!(
                "{} evaluated outside its domain",
                self.name()
            )));
        }
        Ok(match self.kind {
            BenchmarkKind::AckleySphere => {
                vec![-ackley(x), -sphere(x)]
            }
            BenchmarkKind::Zdt4 => {
                let (f1, f2) = zdt4(x);
                vec![-f1, -f2]
            }
            BenchmarkKind::Dtlz3 => dtlz(x, 4, DtlzVariant::Three)
                .into_iter()
                .map(|v| -v)
                .collect(),
            BenchmarkKind::Dtlz4 => dtlz(x, 4, DtlzVariant::Four)
                .into_iter()
                .map(|v| -v)
                .collect(),
        })
    }
}

fn ackley(x: &[f64]) -> f64 {
    let d = x.len() as f64;
    let sum_sq: f64 = x.iter().map(|v| v * v).sum();
    let sum_cos: f64 = x.iter().map(|v| (2.0 * std::f64::consts::PI * v).cos()).sum();
    -20.0 * (-0.2 * (sum_sq / d).sqrt()).exp() - (sum_cos / d).exp()
        + 20.0
        + std::f64::consts::E
}

fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

fn zdt4(x: &[f64]) -> (f64, f64) {
    let f1 = x[0];
    let g = 1.0
        + 10.0 * (x.len() - 1) as f64
        + x[1..]
            .iter()
            .map(|v| v * v - 10.0 * (4.0 * std::f64::consts::PI * v).cos())
            .sum::<f64>();
    let f2 = g * (1.0 - (f1 / g).sqrt());
    (f1, f2)
}

enum DtlzVariant {
    Three,
    Four,
}

fn dtlz(x: &[f64], m: usize, variant: DtlzVariant) -> Vec<f64> {
    let k = x.len() - (m - 1);
    let tail = &x[m - 1..];
    debug_assert_eq!(tail.len(), k);
    let g = match variant {
        DtlzVariant::Three => {
            100.0
                * (k as f64
                    + tail
                        .iter()
                        .map(|v| {
                            let t = v - 0.5;
                            t * t - (20.0 * std::f64::consts::PI * t).cos()
                        })
                        .sum::<f64>())
        }
        DtlzVariant::Four => tail.iter().map(|v| (v - 0.5) * (v - 0.5)).sum(),
    };
    let alpha = match variant {
        DtlzVariant::Three => 1.0,
        DtlzVariant::Four => 100.0,
    };
    let theta: Vec<f64> = x[..m - 1]
        .iter()
        .map(|v| v.powf(alpha) * std::f64::consts::FRAC_PI_2)
        .collect();
    let mut f = Vec::with_capacity(m);
    for i in 0..m {
        let mut val = 1.0 + g;
        for t in &theta[..m - 1 - i] {
            val *= t.cos();
        }
        if i > 0 {
            val *= theta[m - 1 - i].sin();
        }
        f.push(val);
    }
    f
}

/// Either a continuous benchmark or a discrete candidate pool.
pub enum Problem {
    Continuous(Benchmark),
    Pool(CandidatePool),
}

impl Problem {
    /// Parse `ackley-sphere | zdt4 | dtlz3 | dtlz4 | pool:<path>`.
    pub fn parse(name: &str) -> Result<Self> {
        if let Some(path) = name.strip_prefix("pool:") {
            return Ok(Problem::Pool(crate::pool::load_pool(path)?));
        }
        let kind = match name {
            "ackley-sphere" => BenchmarkKind::AckleySphere,
            "zdt4" => BenchmarkKind::Zdt4,
            "dtlz3" => BenchmarkKind::Dtlz3,
            "dtlz4" => BenchmarkKind::Dtlz4,
            other => {
                return Err(PfesError::Config(format!(
                    "unknown benchmark '{other}' (expected ackley-sphere, zdt4, dtlz3, dtlz4, or pool:<path>)"
                )))
            }
        };
        Ok(Problem::Continuous(Benchmark::new(kind)))
    }

    pub fn name(&self) -> String {
        match self {
            Problem::Continuous(b) => b.name().to_string(),
            Problem::Pool(_) => "pool".to_string(),
        }
    }

    pub fn objectives(&self) -> usize {
        match self {
            Problem::Continuous(b) => b.objectives(),
            Problem::Pool(p) => p.objectives(),
        }
    }

    pub fn dims(&self) -> usize {
        match self {
            Problem::Continuous(b) => b.dims(),
            Problem::Pool(p) => p.dims(),
        }
    }
}

/// Reference point: component-wise minimum of the true objectives over a
/// fixed-seed random sample (exhaustive for pools), pushed down by a 1%
/// margin of the observed span.
pub fn reference_point(problem: &Problem) -> Vec<f64> {
    let values: Vec<Vec<f64>> = match problem {
        Problem::Pool(pool) => pool.objective_values().to_vec(),
        Problem::Continuous(b) => {
            let mut rng = ChaCha20Rng::seed_from_u64(CALIBRATION_SEED);
            (0..100_000)
                .map(|_| {
                    let x = b.domain().sample_uniform(&mut rng);
                    b.evaluate(&x).expect("in-domain sample")
                })
                .collect()
        }
    };
    let dims = values[0].len();
    let mut min = vec![f64::INFINITY; dims];
    let mut max = vec![f64::NEG_INFINITY; dims];
    for v in &values {
        for l in 0..dims {
            min[l] = min[l].min(v[l]);
            max[l] = max[l].max(v[l]);
        }
    }
    (0..dims)
        .map(|l| {
            let span = (max[l] - min[l]).max(1.0);
            min[l] - 0.01 * span
        })
        .collect()
}

/// NSGA-II budget for optimal-hypervolume estimation.
#[derive(Debug, Clone)]
pub struct FrontierSearchBudget {
    pub runs: usize,
    pub population: usize,
    pub generations: usize,
}

impl Default for FrontierSearchBudget {
    fn default() -> Self {
        Self {
            runs: 3,
            population: 100,
            generations: 150,
        }
    }
}

/// Estimated optimal hypervolume: exact nondominated set for pools, union of
/// NSGA-II fronts on the true objectives otherwise. Deterministic (fixed
/// internal seeds).
pub fn optimal_hypervolume(
    problem: &Problem,
    reference: &[f64],
    budget: &FrontierSearchBudget,
) -> f64 {
    assert!(budget.runs >= 1, "need at least one search run");
    match problem {
        Problem::Pool(pool) => {
            let frontier = nondominated_filter(pool.objective_values()).expect("finite pool");
            hypervolume(&frontier, reference)
        }
        Problem::Continuous(b) => {
            let cfg = Nsga2Config {
                population: budget.population,
                generations: budget.generations,
                max_size: 200,
                ..Default::default()
            };
            let mut all: Vec<Vec<f64>> = Vec::new();
            for run in 0..budget.runs {
                let mut rng = ChaCha20Rng::seed_from_u64(CALIBRATION_SEED ^ (run as u64 + 1));
                let pts = nsga2::optimize(
                    |x| b.evaluate(x).expect("in-domain"),
                    b.domain(),
                    &cfg,
                    &mut rng,
                );
                all.extend(pts.into_iter().map(|p| p.f));
            }
            let frontier = nondominated_filter(&all).expect("finite objectives");
            hypervolume(&frontier, reference)
        }
    }
}

/// Relative hypervolume of an observed set against a precomputed optimal
/// hypervolume, clipped to 1.0 to absorb estimation error.
pub fn relative_hypervolume(observed: &[Vec<f64>], reference: &[f64], optimal_hv: f64) -> f64 {
    assert!(optimal_hv > 0.0, "optimal hypervolume must be positive");
    if observed.is_empty() {
        return 0.0;
    }
    let frontier = nondominated_filter(observed).expect("finite observations");
    if frontier.is_empty() {
        return 0.0;
    }
    (hypervolume(&frontier, reference) / optimal_hv).min(1.0)
}
