//! Experiment orchestration: the Bayesian-optimization loop in coupled and
//! cost-sensitive decoupled modes, acquisition maximization over boxes
//! (DIRECT) or candidate pools (exact argmax), cost accounting, and trace
//! output.
//!
//! Everything downstream of the seed is deterministic: a single ChaCha20
//! stream drives initialization, frontier sampling, and the baselines, and
//! reference points / optimal-hypervolume estimates use fixed calibration
//! seeds so they are identical across experiment seeds.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::seq::index::sample as index_sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Deserialize;

use crate::baselines::{
    augmented_tchebycheff, mesmo_acquisition, normalize_objectives, parego_acquisition,
    smsego_acquisition, ScalarizationWeights,
};
use crate::benchmarks::{
    optimal_hypervolume, reference_point, relative_hypervolume, FrontierSearchBudget, Problem,
};
use crate::direct::{self, DirectConfig};
use crate::domain::BoxDomain;
use crate::entropy::{
    decoupled_acquisition_with, pfes_acquisition_with, MarginalEvaluator, PftnEvaluator,
};
use crate::error::{PfesError, Result};
use crate::gp::{self, Dataset, GpModel, KernelConfig};
use crate::nsga2::Nsga2Config;
use crate::pareto::{nondominated_filter, ParetoFrontier};
use crate::partition::{partition_2d, partition_qhv, refine_for_marginal, CellPartition};
use crate::rfm::draw_rfm;
use crate::sampling::{solve_frontier_nsga2, PoolFrontierSampler};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Pfes,
    PfesDecoupled,
    Parego,
    Smsego,
    Mesmo,
    Random,
}

impl Method {
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "pfes" => Method::Pfes,
            "pfes-decoupled" => Method::PfesDecoupled,
            "parego" => Method::Parego,
            "smsego" => Method::Smsego,
            "mesmo" => Method::Mesmo,
            "random" => Method::Random,
            other => {
                return Err(PfesError::Config(format!(
                    "unknown method '{other}' (expected pfes, pfes-decoupled, parego, smsego, mesmo, random)"
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Method::Pfes => "pfes",
            Method::PfesDecoupled => "pfes-decoupled",
            Method::Parego => "parego",
            Method::Smsego => "smsego",
            Method::Mesmo => "mesmo",
            Method::Random => "random",
        }
    }
}

fn default_costs() -> Option<Vec<f64>> {
    None
}
fn default_frontier_samples() -> usize {
    10
}
fn default_frontier_cap() -> usize {
    50
}
fn default_rfm_features() -> usize {
    500
}
fn default_n_init() -> usize {
    5
}
fn default_seeds() -> Vec<u64> {
    vec![0]
}
fn default_acq_max_evals() -> usize {
    2000
}
fn default_noise() -> f64 {
    1e-4
}
fn default_nsga_population() -> usize {
    100
}
fn default_nsga_generations() -> usize {
    100
}
fn default_opt_hv_runs() -> usize {
    3
}
fn default_opt_hv_generations() -> usize {
    150
}

/// Experiment definition, loadable from a TOML file; unknown keys rejected.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// `ackley-sphere | zdt4 | dtlz3 | dtlz4 | pool:<path>`.
    pub benchmark: String,
    pub method: Method,
    /// Coupled: number of BO queries after initialization. Decoupled: total
    /// observation-cost budget.
    pub budget: f64,
    /// Per-objective observation costs λ; default all 1.
    #[serde(default = "default_costs")]
    pub costs: Option<Vec<f64>>,
    /// |PF|: sampled frontiers per iteration.
    #[serde(default = "default_frontier_samples")]
    pub n_frontier_samples: usize,
    /// |F*| cap per sampled frontier.
    #[serde(default = "default_frontier_cap")]
    pub frontier_cap: usize,
    /// RFM basis count D.
    #[serde(default = "default_rfm_features")]
    pub rfm_features: usize,
    #[serde(default = "default_n_init")]
    pub n_init: usize,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    /// DIRECT evaluation budget per acquisition maximization.
    #[serde(default = "default_acq_max_evals")]
    pub acq_max_evals: usize,
    /// GP observation-noise variance.
    #[serde(default = "default_noise")]
    pub noise: f64,
    /// Lengthscale grid for marginal-likelihood tuning (unit-box inputs).
    #[serde(default)]
    pub lengthscale_grid: Option<Vec<f64>>,
    /// Re-tune hyperparameters each iteration. Default: true on continuous
    /// benchmarks, false on pools (tuned once on the initial design).
    #[serde(default)]
    pub retune_hyperparameters: Option<bool>,
    #[serde(default = "default_nsga_population")]
    pub nsga_population: usize,
    #[serde(default = "default_nsga_generations")]
    pub nsga_generations: usize,
    /// Precomputed optimal hypervolume; estimated when absent.
    #[serde(default)]
    pub optimal_hv: Option<f64>,
    #[serde(default = "default_opt_hv_runs")]
    pub optimal_hv_runs: usize,
    #[serde(default = "default_opt_hv_generations")]
    pub optimal_hv_generations: usize,
    /// Output directory for traces; nothing is written when absent.
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| PfesError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_toml_file<P: AsRef<Path>>(path: P) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.budget > 0.0) {
            return Err(PfesError::Config("budget must be positive".into()));
        }
        if let Some(costs) = &self.costs {
            if costs.iter().any(|c| !(*c > 0.0)) {
                return Err(PfesError::Config("costs must be positive".into()));
            }
        }
        if self.n_init == 0 {
            return Err(PfesError::Config("n_init must be at least 1".into()));
        }
        if self.n_frontier_samples == 0 || self.frontier_cap == 0 {
            return Err(PfesError::Config(
                "n_frontier_samples and frontier_cap must be at least 1".into(),
            ));
        }
        if self.rfm_features == 0 {
            return Err(PfesError::Config("rfm_features must be at least 1".into()));
        }
        if self.seeds.is_empty() {
            return Err(PfesError::Config("need at least one seed".into()));
        }
        Ok(())
    }

    fn effective_costs(&self, objectives: usize) -> Result<Vec<f64>> {
        match &self.costs {
            None => Ok(vec![1.0; objectives]),
            Some(c) if c.len() == objectives => Ok(c.clone()),
            Some(c) => Err(PfesError::Config(format!(
                "{} costs for {} objectives",
                c.len(),
                objectives
            ))),
        }
    }
}

/// One BO query as recorded in the trace.
#[derive(Debug, Clone)]
pub struct ObservationRecord {
    pub iteration: usize,
    pub cumulative_cost: f64,
    /// Query location in original domain coordinates.
    pub input: Vec<f64>,
    /// Queried objective (0-based); `None` means all objectives.
    pub objective: Option<usize>,
    /// Observed values per objective; unqueried entries are `None`.
    pub observed: Vec<Option<f64>>,
    pub acquisition: f64,
    /// Relative hypervolume of the fully observed points after this query.
    pub rhv: f64,
    /// Wall time of the iteration; kept out of the trace CSV so identical
    /// seeds produce byte-identical files.
    pub wall_ms: f64,
}

#[derive(Debug, Clone)]
pub struct ExperimentMetadata {
    pub benchmark: String,
    pub method: Method,
    pub seed: u64,
    pub objectives: usize,
    pub dims: usize,
    pub costs: Vec<f64>,
    pub reference: Vec<f64>,
    pub optimal_hv: f64,
    pub n_init: usize,
    pub budget: f64,
    pub total_wall_ms: f64,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub records: Vec<ObservationRecord>,
    pub metadata: ExperimentMetadata,
}

impl ExperimentResult {
    pub fn final_rhv(&self) -> f64 {
        self.records.last().map_or(0.0, |r| r.rhv)
    }
}

// ---------------------------------------------------------------------------
// Acquisition maximization
// ---------------------------------------------------------------------------

/// Search space of an acquisition maximization.
pub enum AcquisitionSpace<'a> {
    /// Bounded box, searched with DIRECT.
    Continuous(&'a BoxDomain),
    /// Finite candidate list with an exclusion mask; exact argmax.
    Pool {
        candidates: &'a [Vec<f64>],
        excluded: &'a [bool],
    },
}

/// The winning query of an acquisition maximization.
#[derive(Debug, Clone, PartialEq)]
pub enum ChosenPoint {
    Point(Vec<f64>),
    Candidate(usize),
}

/// Maximize `acq` over the space. Continuous spaces use deterministic DIRECT
/// division with budget `cfg.max_evals`; pools take the exact argmax with
/// ties to the lowest index. Returns `None` when every candidate is excluded.
pub fn optimize_acquisition<F>(
    acq: F,
    space: &AcquisitionSpace,
    cfg: &DirectConfig,
) -> Option<(ChosenPoint, f64)>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    match space {
        AcquisitionSpace::Continuous(domain) => {
            let (x, v) = direct::maximize(acq, domain, cfg);
            Some((ChosenPoint::Point(x), v))
        }
        AcquisitionSpace::Pool {
            candidates,
            excluded,
        } => {
            let scores: Vec<f64> = candidates
                .par_iter()
                .enumerate()
                .map(|(i, x)| if excluded[i] { f64::NEG_INFINITY } else { acq(x) })
                .collect();
            let mut best: Option<(usize, f64)> = None;
            for (i, &s) in scores.iter().enumerate() {
                if excluded[i] {
                    continue;
                }
                if best.map_or(true, |(_, bv)| s > bv) {
                    best = Some((i, s));
                }
            }
            best.map(|(i, v)| (ChosenPoint::Candidate(i), v))
        }
    }
}

// ---------------------------------------------------------------------------
// Experiment loop
// ---------------------------------------------------------------------------

struct ProblemState {
    problem: Problem,
    /// Unit-box mapping for model space.
    scaling: BoxDomain,
    reference: Vec<f64>,
    optimal_hv: f64,
    costs: Vec<f64>,
}

impl ProblemState {
    fn objectives(&self) -> usize {
        self.problem.objectives()
    }

    /// True objective vector at a raw-domain point (pool rows by index).
    fn truth(&self, q: &ChosenPoint) -> Result<Vec<f64>> {
        match (&self.problem, q) {
            (Problem::Continuous(b), ChosenPoint::Point(x)) => b.evaluate(x),
            (Problem::Pool(p), ChosenPoint::Candidate(i)) => {
                Ok(p.objective_values()[*i].clone())
            }
            _ => Err(PfesError::InvalidInput("query/problem mismatch".into())),
        }
    }

    fn raw_input(&self, q: &ChosenPoint) -> Vec<f64> {
        match (&self.problem, q) {
            (_, ChosenPoint::Point(x)) => x.clone(),
            (Problem::Pool(p), ChosenPoint::Candidate(i)) => p.inputs()[*i].clone(),
            _ => unreachable!(),
        }
    }

    fn unit_input(&self, q: &ChosenPoint) -> Vec<f64> {
        self.scaling.to_unit(&self.raw_input(q))
    }
}

/// Run one seeded experiment and return its trace.
pub fn run_experiment(config: &ExperimentConfig, seed: u64) -> Result<ExperimentResult> {
    config.validate()?;
    let problem = Problem::parse(&config.benchmark)?;
    let objectives = problem.objectives();
    let costs = config.effective_costs(objectives)?;
    let scaling = match &problem {
        Problem::Continuous(b) => b.domain().clone(),
        Problem::Pool(p) => p.input_box(),
    };
    let reference = reference_point(&problem);
    let optimal_hv = match config.optimal_hv {
        Some(v) if v > 0.0 => v,
        Some(_) => return Err(PfesError::Config("optimal_hv must be positive".into())),
        None => optimal_hypervolume(
            &problem,
            &reference,
            &FrontierSearchBudget {
                runs: config.optimal_hv_runs,
                generations: config.optimal_hv_generations,
                ..Default::default()
            },
        ),
    };
    if !(optimal_hv > 0.0) {
        return Err(PfesError::Config(
            "estimated optimal hypervolume is not positive".into(),
        ));
    }
    let state = ProblemState {
        problem,
        scaling,
        reference,
        optimal_hv,
        costs,
    };

    let start = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut runner = Loop::new(config, &state, &mut rng)?;
    let mut records = Vec::new();
    let mut iteration = 0usize;
    loop {
        iteration += 1;
        if !runner.budget_allows_next(&records) {
            break;
        }
        match runner.step(iteration, &mut rng)? {
            Some(record) => records.push(record),
            None => break,
        }
    }
    let metadata = ExperimentMetadata {
        benchmark: config.benchmark.clone(),
        method: config.method,
        seed,
        objectives,
        dims: state.problem.dims(),
        costs: state.costs.clone(),
        reference: state.reference.clone(),
        optimal_hv: state.optimal_hv,
        n_init: config.n_init,
        budget: config.budget,
        total_wall_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    Ok(ExperimentResult { records, metadata })
}

/// Mutable loop state for one experiment.
struct Loop<'a> {
    config: &'a ExperimentConfig,
    state: &'a ProblemState,
    data: Dataset,
    /// Pool candidate -> dataset row, for decoupled re-observation.
    pool_rows: Vec<Option<usize>>,
    /// Kernel selected by the last tuning pass; reused when not retuning.
    kernel: Option<KernelConfig>,
    cumulative_cost: f64,
    sum_costs: f64,
    /// Unit-box candidates for pools, precomputed once.
    pool_unit: Vec<Vec<f64>>,
}

impl<'a> Loop<'a> {
    fn new(
        config: &'a ExperimentConfig,
        state: &'a ProblemState,
        rng: &mut ChaCha20Rng,
    ) -> Result<Self> {
        let objectives = state.objectives();
        let sum_costs: f64 = state.costs.iter().sum();
        let mut data = Dataset::with_mask(vec![], vec![], vec![])?;
        let mut pool_rows = Vec::new();
        let mut pool_unit = Vec::new();
        // Initial design: fully observed in both modes so every GP has data.
        match &state.problem {
            Problem::Continuous(b) => {
                let mut inputs = Vec::new();
                let mut outputs = Vec::new();
                for _ in 0..config.n_init {
                    let x = b.domain().sample_uniform(rng);
                    outputs.push(b.evaluate(&x)?);
                    inputs.push(state.scaling.to_unit(&x));
                }
                data = Dataset::new(inputs, outputs)?;
            }
            Problem::Pool(p) => {
                if config.n_init > p.len() {
                    return Err(PfesError::Config("n_init exceeds pool size".into()));
                }
                pool_rows = vec![None; p.len()];
                pool_unit = p.inputs().iter().map(|x| state.scaling.to_unit(x)).collect();
                let mut chosen = index_sample(rng, p.len(), config.n_init).into_vec();
                chosen.sort_unstable();
                let mut inputs = Vec::new();
                let mut outputs = Vec::new();
                for (row, &i) in chosen.iter().enumerate() {
                    pool_rows[i] = Some(row);
                    inputs.push(pool_unit[i].clone());
                    outputs.push(p.objective_values()[i].clone());
                }
                data = Dataset::new(inputs, outputs)?;
            }
        }
        Ok(Self {
            config,
            state,
            data,
            pool_rows,
            kernel: None,
            cumulative_cost: config.n_init as f64 * sum_costs,
            sum_costs,
            pool_unit,
        })
    }

    fn budget_allows_next(&self, records: &[ObservationRecord]) -> bool {
        match self.config.method {
            Method::PfesDecoupled => true, // checked after selection, per-query cost varies
            _ => (records.len() as f64) < self.config.budget.round(),
        }
    }

    fn retune(&self) -> bool {
        self.config
            .retune_hyperparameters
            .unwrap_or(matches!(self.state.problem, Problem::Continuous(_)))
    }

    fn fit_model(&mut self) -> Result<GpModel> {
        let grid = self
            .config
            .lengthscale_grid
            .clone()
            .unwrap_or_else(gp::default_lengthscale_grid);
        if self.kernel.is_none() || self.retune() {
            let model = gp::tune_lengthscale(&self.data, &grid, self.config.noise)?;
            self.kernel = Some(model.kernel().clone());
            Ok(model)
        } else {
            gp::fit(&self.data, self.kernel.as_ref().unwrap())
        }
    }

    /// Sample |PF| frontiers from the current model.
    fn sample_frontiers(
        &self,
        model: &GpModel,
        rng: &mut ChaCha20Rng,
    ) -> Result<Vec<ParetoFrontier>> {
        let mut frontiers = Vec::with_capacity(self.config.n_frontier_samples);
        match &self.state.problem {
            Problem::Continuous(_) => {
                let cfg = Nsga2Config {
                    population: self.config.nsga_population,
                    generations: self.config.nsga_generations,
                    max_size: self.config.frontier_cap,
                    ..Default::default()
                };
                let unit = BoxDomain::unit(model.dims());
                for _ in 0..self.config.n_frontier_samples {
                    let sample = draw_rfm(model, self.config.rfm_features, rng)?;
                    frontiers.push(solve_frontier_nsga2(&sample, &unit, &cfg, rng));
                }
            }
            Problem::Pool(_) => {
                let sampler = PoolFrontierSampler::new(model, &self.pool_unit)?;
                for _ in 0..self.config.n_frontier_samples {
                    frontiers.push(sampler.draw(rng, self.config.frontier_cap));
                }
            }
        }
        Ok(frontiers)
    }

    fn partitions(&self, frontiers: &[ParetoFrontier]) -> Result<Vec<CellPartition>> {
        frontiers
            .iter()
            .filter(|f| !f.is_empty())
            .map(|f| {
                if f.objectives() == 2 {
                    partition_2d(f)
                } else {
                    partition_qhv(f)
                }
            })
            .collect()
    }

    fn direct_cfg(&self) -> DirectConfig {
        DirectConfig {
            max_evals: self.config.acq_max_evals,
            min_side: 1e-6,
        }
    }

    /// Pool exclusion mask for coupled selection (fully observed rows).
    fn coupled_exclusions(&self) -> Vec<bool> {
        self.pool_rows
            .iter()
            .map(|r| match r {
                None => false,
                Some(row) => self.data.observed()[*row].iter().all(|o| *o),
            })
            .collect()
    }

    /// One BO iteration; `None` when the budget or pool is exhausted.
    fn step(
        &mut self,
        iteration: usize,
        rng: &mut ChaCha20Rng,
    ) -> Result<Option<ObservationRecord>> {
        let t0 = Instant::now();
        let selection = match self.config.method {
            Method::Pfes => self.select_pfes(rng)?,
            Method::PfesDecoupled => self.select_pfes_decoupled(rng)?,
            Method::Parego => self.select_parego(rng)?,
            Method::Smsego => self.select_smsego()?,
            Method::Mesmo => self.select_mesmo(rng)?,
            Method::Random => self.select_random(rng),
        };
        let Some((chosen, acq_value, objective)) = selection else {
            return Ok(None);
        };
        // Decoupled budget check: stop before an unaffordable query.
        let query_cost = match objective {
            Some(l) => self.state.costs[l],
            None => self.sum_costs,
        };
        if matches!(self.config.method, Method::PfesDecoupled)
            && self.cumulative_cost + query_cost > self.config.budget + 1e-9
        {
            return Ok(None);
        }

        let truth = self.state.truth(&chosen)?;
        let unit = self.state.unit_input(&chosen);
        let observed: Vec<Option<f64>> = match objective {
            None => truth.iter().map(|v| Some(*v)).collect(),
            Some(l) => (0..truth.len())
                .map(|k| if k == l { Some(truth[k]) } else { None })
                .collect(),
        };
        // Record the observation, merging into an existing pool row if any.
        match (&chosen, objective) {
            (ChosenPoint::Candidate(i), Some(l)) => match self.pool_rows[*i] {
                Some(row) => self.data.observe_entry(row, l, truth[l])?,
                None => {
                    self.pool_rows[*i] = Some(self.data.len());
                    self.data.push(unit.clone(), observed.clone())?;
                }
            },
            (ChosenPoint::Candidate(i), None) => match self.pool_rows[*i] {
                Some(row) => {
                    for l in 0..truth.len() {
                        self.data.observe_entry(row, l, truth[l])?;
                    }
                }
                None => {
                    self.pool_rows[*i] = Some(self.data.len());
                    self.data.push(unit.clone(), observed.clone())?;
                }
            },
            (ChosenPoint::Point(_), _) => {
                self.data.push(unit.clone(), observed.clone())?;
            }
        }
        self.cumulative_cost += query_cost;
        let rhv = relative_hypervolume(
            &self.data.fully_observed(),
            &self.state.reference,
            self.state.optimal_hv,
        );
        Ok(Some(ObservationRecord {
            iteration,
            cumulative_cost: self.cumulative_cost,
            input: self.state.raw_input(&chosen),
            objective,
            observed,
            acquisition: acq_value,
            rhv,
            wall_ms: t0.elapsed().as_secs_f64() * 1e3,
        }))
    }

    // -- method-specific selection ------------------------------------------

    fn select_pfes(
        &mut self,
        rng: &mut ChaCha20Rng,
    ) -> Result<Option<(ChosenPoint, f64, Option<usize>)>> {
        let model = self.fit_model()?;
        let frontiers = self.sample_frontiers(&model, rng)?;
        let partitions = self.partitions(&frontiers)?;
        let evals: Vec<PftnEvaluator> = partitions.iter().map(PftnEvaluator::new).collect();
        let acq = |u: &[f64]| match model.predict(u) {
            Ok(pred) => pfes_acquisition_with(&pred, &evals),
            Err(_) => f64::NEG_INFINITY,
        };
        Ok(self
            .maximize_over_space(&acq)
            .map(|(c, v)| (c, v, None)))
    }

    fn select_pfes_decoupled(
        &mut self,
        rng: &mut ChaCha20Rng,
    ) -> Result<Option<(ChosenPoint, f64, Option<usize>)>> {
        let model = self.fit_model()?;
        let frontiers = self.sample_frontiers(&model, rng)?;
        let partitions = self.partitions(&frontiers)?;
        let objectives = self.state.objectives();
        let mut best: Option<(ChosenPoint, f64, Option<usize>)> = None;
        for l in 0..objectives {
            let evals: Vec<MarginalEvaluator> = partitions
                .iter()
                .map(|p| {
                    let (refined, bp) = refine_for_marginal(p, l);
                    MarginalEvaluator::new(&refined, &bp)
                })
                .collect::<Result<Vec<_>>>()?;
            let costs = &self.state.costs;
            let acq = |u: &[f64]| match model.predict(u) {
                Ok(pred) => decoupled_acquisition_with(&pred, &evals, l, costs),
                Err(_) => f64::NEG_INFINITY,
            };
            let candidate = match &self.state.problem {
                Problem::Continuous(_) => self.maximize_over_space(&acq),
                Problem::Pool(_) => {
                    // Exclude (candidate, l) pairs already observed.
                    let excluded: Vec<bool> = self
                        .pool_rows
                        .iter()
                        .map(|r| match r {
                            None => false,
                            Some(row) => self.data.observed()[*row][l],
                        })
                        .collect();
                    let space = AcquisitionSpace::Pool {
                        candidates: &self.pool_unit,
                        excluded: &excluded,
                    };
                    optimize_acquisition(&acq, &space, &self.direct_cfg())
                }
            };
            if let Some((c, v)) = candidate {
                if best.as_ref().map_or(true, |(_, bv, _)| v > *bv) {
                    best = Some((c, v, Some(l)));
                }
            }
        }
        Ok(best)
    }

    fn select_parego(
        &mut self,
        rng: &mut ChaCha20Rng,
    ) -> Result<Option<(ChosenPoint, f64, Option<usize>)>> {
        let objectives = self.state.objectives();
        let weights = ScalarizationWeights::sample(objectives, 0.05, rng);
        let full = self.data.fully_observed();
        let (normalized, _) = normalize_objectives(&full);
        let scalar: Vec<f64> = normalized
            .iter()
            .map(|f| augmented_tchebycheff(f, &weights))
            .collect();
        let incumbent = scalar.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        // Scalarized single-objective dataset over the fully observed rows.
        let rows: Vec<usize> = (0..self.data.len())
            .filter(|&i| self.data.observed()[i].iter().all(|o| *o))
            .collect();
        let inputs: Vec<Vec<f64>> = rows.iter().map(|&i| self.data.inputs()[i].clone()).collect();
        let outputs: Vec<Vec<f64>> = scalar.iter().map(|s| vec![*s]).collect();
        let scalar_data = Dataset::new(inputs, outputs)?;
        let grid = self
            .config
            .lengthscale_grid
            .clone()
            .unwrap_or_else(gp::default_lengthscale_grid);
        let model = gp::tune_lengthscale(&scalar_data, &grid, self.config.noise)?;
        let acq = |u: &[f64]| match model.predict(u) {
            Ok(pred) => parego_acquisition(&pred, incumbent),
            Err(_) => f64::NEG_INFINITY,
        };
        Ok(self.maximize_over_space(&acq).map(|(c, v)| (c, v, None)))
    }

    fn select_smsego(&mut self) -> Result<Option<(ChosenPoint, f64, Option<usize>)>> {
        let model = self.fit_model()?;
        let observed = nondominated_filter(&self.data.fully_observed())?;
        let reference = &self.state.reference;
        let acq = |u: &[f64]| match model.predict(u) {
            Ok(pred) => smsego_acquisition(&pred, &observed, reference),
            Err(_) => f64::NEG_INFINITY,
        };
        Ok(self.maximize_over_space(&acq).map(|(c, v)| (c, v, None)))
    }

    fn select_mesmo(
        &mut self,
        rng: &mut ChaCha20Rng,
    ) -> Result<Option<(ChosenPoint, f64, Option<usize>)>> {
        let model = self.fit_model()?;
        let frontiers = self.sample_frontiers(&model, rng)?;
        let frontiers: Vec<ParetoFrontier> =
            frontiers.into_iter().filter(|f| !f.is_empty()).collect();
        let acq = |u: &[f64]| match model.predict(u) {
            Ok(pred) => mesmo_acquisition(&pred, &frontiers),
            Err(_) => f64::NEG_INFINITY,
        };
        Ok(self.maximize_over_space(&acq).map(|(c, v)| (c, v, None)))
    }

    fn select_random(
        &mut self,
        rng: &mut ChaCha20Rng,
    ) -> Option<(ChosenPoint, f64, Option<usize>)> {
        match &self.state.problem {
            Problem::Continuous(b) => {
                let x = b.domain().sample_uniform(rng);
                Some((ChosenPoint::Point(x), rng.gen::<f64>(), None))
            }
            Problem::Pool(p) => {
                let excluded = self.coupled_exclusions();
                let scores: Vec<f64> = (0..p.len()).map(|_| rng.gen::<f64>()).collect();
                let mut best: Option<(usize, f64)> = None;
                for (i, &s) in scores.iter().enumerate() {
                    if excluded[i] {
                        continue;
                    }
                    if best.map_or(true, |(_, bv)| s > bv) {
                        best = Some((i, s));
                    }
                }
                best.map(|(i, v)| (ChosenPoint::Candidate(i), v, None))
            }
        }
    }

    fn maximize_over_space<F>(&self, acq: F) -> Option<(ChosenPoint, f64)>
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        match &self.state.problem {
            Problem::Continuous(_) => {
                // DIRECT searches the unit cube; predictions live there too.
                let unit = BoxDomain::unit(self.state.problem.dims());
                let space = AcquisitionSpace::Continuous(&unit);
                optimize_acquisition(&acq, &space, &self.direct_cfg()).map(|(c, v)| {
                    match c {
                        ChosenPoint::Point(u) => {
                            (ChosenPoint::Point(self.state.scaling.from_unit(&u)), v)
                        }
                        other => (other, v),
                    }
                })
            }
            Problem::Pool(_) => {
                let excluded = self.coupled_exclusions();
                let space = AcquisitionSpace::Pool {
                    candidates: &self.pool_unit,
                    excluded: &excluded,
                };
                optimize_acquisition(&acq, &space, &self.direct_cfg())
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Trace and metadata output
// ---------------------------------------------------------------------------

/// Render the trace CSV (header plus one row per query).
pub fn trace_csv(result: &ExperimentResult) -> String {
    let dims = result.metadata.dims;
    let objectives = result.metadata.objectives;
    let mut out = String::new();
    out.push_str("iteration,cum_cost,objective,acq_value,rhv");
    for i in 1..=dims {
        let _ = write!(out, ",x{i}");
    }
    for l in 1..=objectives {
        let _ = write!(out, ",y{l}");
    }
    out.push('\n');
    for r in &result.records {
        let obj = match r.objective {
            None => "all".to_string(),
            Some(l) => (l + 1).to_string(),
        };
        let _ = write!(
            out,
            "{},{},{},{},{}",
            r.iteration, r.cumulative_cost, obj, r.acquisition, r.rhv
        );
        for v in &r.input {
            let _ = write!(out, ",{v}");
        }
        for o in &r.observed {
            match o {
                Some(v) => {
                    let _ = write!(out, ",{v}");
                }
                None => out.push(','),
            }
        }
        out.push('\n');
    }
    out
}

/// Render the metadata sidecar (structured key-value text).
pub fn metadata_text(result: &ExperimentResult) -> String {
    let m = &result.metadata;
    let list = |v: &[f64]| {
        let items: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
        format!("[{}]", items.join(", "))
    };
    let mut out = String::new();
    let _ = writeln!(out, "benchmark = \"{}\"", m.benchmark);
    let _ = writeln!(out, "method = \"{}\"", m.method.name());
    let _ = writeln!(out, "seed = {}", m.seed);
    let _ = writeln!(out, "objectives = {}", m.objectives);
    let _ = writeln!(out, "dims = {}", m.dims);
    let _ = writeln!(out, "budget = {}", m.budget);
    let _ = writeln!(out, "n_init = {}", m.n_init);
    let _ = writeln!(out, "costs = {}", list(&m.costs));
    let _ = writeln!(out, "reference = {}", list(&m.reference));
    let _ = writeln!(out, "optimal_hv = {}", m.optimal_hv);
    let _ = writeln!(out, "records = {}", result.records.len());
    let _ = writeln!(out, "final_rhv = {}", result.final_rhv());
    let _ = writeln!(out, "total_wall_ms = {:.3}", m.total_wall_ms);
    let _ = writeln!(out, "version = \"{}\"", env!("CARGO_PKG_VERSION"));
    out
}

/// Write `<benchmark>_<method>_seed<k>.csv` and its `.meta` sidecar.
pub fn write_outputs(result: &ExperimentResult, dir: &Path) -> Result<(PathBuf, PathBuf)> {
    std::fs::create_dir_all(dir)?;
    let stem = format!(
        "{}_{}_seed{}",
        sanitize(&result.metadata.benchmark),
        result.metadata.method.name(),
        result.metadata.seed
    );
    let csv_path = dir.join(format!("{stem}.csv"));
    let meta_path = dir.join(format!("{stem}.meta"));
    std::fs::write(&csv_path, trace_csv(result))?;
    std::fs::write(&meta_path, metadata_text(result))?;
    Ok((csv_path, meta_path))
}

fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '-' })
        .collect()
}
