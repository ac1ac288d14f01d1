//! Sampling approximate Pareto frontiers from the surrogate: RFM + NSGA-II
//! on continuous domains, joint posterior draws on discrete candidate pools.

use nalgebra::{Cholesky, DVector, Dyn};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::domain::BoxDomain;
use crate::error::{PfesError, Result};
use crate::gp::GpModel;
use crate::nsga2::{self, Nsga2Config};
use crate::pareto::ParetoFrontier;
use crate::rfm::RfmSample;

/// Solve the sampled functions with NSGA-II and return the nondominated
/// subset of the final population truncated to `cfg.max_size`.
pub fn solve_frontier_nsga2<R: Rng + ?Sized>(
    sample: &RfmSample,
    domain: &BoxDomain,
    cfg: &Nsga2Config,
    rng: &mut R,
) -> ParetoFrontier {
    let points = nsga2::optimize(|x| sample.evaluate(x), domain, cfg, rng);
    nsga2::frontier_of(&points, cfg.max_size)
}

/// Joint posterior sampler over a fixed candidate set: the per-objective
/// posterior Cholesky factors are computed once, after which each frontier
/// draw costs one back-substitution per objective.
pub struct PoolFrontierSampler {
    means: Vec<DVector<f64>>,
    chols: Vec<Cholesky<f64, Dyn>>,
    transforms: Vec<(f64, f64)>,
    candidates: usize,
}

impl PoolFrontierSampler {
    pub fn new(model: &GpModel, candidates: &[Vec<f64>]) -> Result<Self> {
        if candidates.is_empty() {
            return Err(PfesError::InvalidInput("candidate pool is empty".into()));
        }
        let mut means = Vec::with_capacity(model.objectives());
        let mut chols = Vec::with_capacity(model.objectives());
        let mut transforms = Vec::with_capacity(model.objectives());
        for l in 0..model.objectives() {
            let (mean, chol, y_mean, y_scale) = model.joint_posterior(l, candidates)?;
            means.push(mean);
            chols.push(chol);
            transforms.push((y_mean, y_scale));
        }
        Ok(Self {
            means,
            chols,
            transforms,
            candidates: candidates.len(),
        })
    }

    /// One joint draw per objective; returns the nondominated subset of the
    /// sampled candidate vectors, truncated to `max_size`.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R, max_size: usize) -> ParetoFrontier {
        let values = self.draw_values(rng);
        ParetoFrontier::from_points(values, max_size).expect("max_size >= 1")
    }

    /// The raw sampled objective vectors per candidate (no filtering).
    pub fn draw_values<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Vec<f64>> {
        let n = self.candidates;
        let mut values = vec![vec![0.0; self.means.len()]; n];
        for (l, ((mean, chol), (y_mean, y_scale))) in self
            .means
            .iter()
            .zip(&self.chols)
            .zip(&self.transforms)
            .enumerate()
        {
            let z = DVector::from_fn(n, |_, _| StandardNormal.sample(rng));
            let sample = mean + chol.l() * z;
            for (i, v) in sample.iter().enumerate() {
                values[i][l] = y_mean + y_scale * v;
            }
        }
        values
    }
}

/// One-shot pool frontier draw (see [`PoolFrontierSampler`] for reuse).
pub fn sample_frontier_pool<R: Rng + ?Sized>(
    model: &GpModel,
    candidates: &[Vec<f64>],
    rng: &mut R,
    max_size: usize,
) -> Result<ParetoFrontier> {
    Ok(PoolFrontierSampler::new(model, candidates)?.draw(rng, max_size))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gp::{fit, Dataset, KernelConfig};
    use crate::oracles::brute_force_nondominated;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn nsga_on_linear_sample_recovers_tradeoff() {
        // Frontier of f1 = x, f2 = 1-x lies on the line f2 = 1 - f1.
        let domain = BoxDomain::new(vec![0.0], vec![1.0]).unwrap();
        let cfg = Nsga2Config {
            population: 60,
            generations: 30,
            max_size: 25,
            ..Default::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        // Hand-built "sample" via the prior with weights forced through a
        // closure would bypass RfmSample; use nsga2 directly in nsga2 tests.
        // Here: check the wrapper end to end on a posterior draw.
        let data = Dataset::new(
            vec![vec![0.1], vec![0.5], vec![0.9]],
            vec![vec![0.1, 0.9], vec![0.5, 0.5], vec![0.9, 0.1]],
        )
        .unwrap();
        let model = fit(&data, &KernelConfig::new(0.4, 1e-6).unwrap()).unwrap();
        let sample = crate::rfm::draw_rfm(&model, 600, &mut rng).unwrap();
        let frontier = solve_frontier_nsga2(&sample, &domain, &cfg, &mut rng);
        assert!(!frontier.is_empty() && frontier.len() <= 25);
        // Output must already be mutually nondominated.
        let again = crate::nondominated_filter(frontier.points()).unwrap();
        assert_eq!(again.len(), frontier.len());
    }

    #[test]
    fn single_candidate_pool_draw() {
        let data = Dataset::new(vec![vec![0.5]], vec![vec![1.0, -1.0]]).unwrap();
        let model = fit(&data, &KernelConfig::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = sample_frontier_pool(&model, &[vec![0.2]], &mut rng, 50).unwrap();
        assert_eq!(f.len(), 1);
    }

    #[test]
    fn zero_variance_pool_draw_returns_posterior_means() {
        // Noise-free interpolation at the training points themselves.
        let xs = vec![vec![0.1], vec![0.5], vec![0.9]];
        let data = Dataset::new(
            xs.clone(),
            vec![vec![1.0, 0.0], vec![0.0, 0.5], vec![-1.0, 1.0]],
        )
        .unwrap();
        let model = fit(&data, &KernelConfig::new(0.3, 0.0).unwrap()).unwrap();
        let sampler = PoolFrontierSampler::new(&model, &xs).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let values = sampler.draw_values(&mut rng);
        for (x, v) in xs.iter().zip(&values) {
            let pred = model.predict(x).unwrap();
            for l in 0..2 {
                assert!(
                    (v[l] - pred.mean[l]).abs() < 1e-3,
                    "draw {v:?} vs mean {:?}",
                    pred.mean
                );
            }
        }
        let frontier = sampler.draw(&mut rng, 50);
        let means: Vec<Vec<f64>> = xs.iter().map(|x| model.predict(x).unwrap().mean).collect();
        let expect = brute_force_nondominated(&means);
        assert_eq!(frontier.len(), expect.len());
    }

    #[test]
    fn pool_draw_nondominance_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let xs: Vec<Vec<f64>> = (0..40).map(|_| vec![rng.gen_range(0.0..1.0)]).collect();
        let train = Dataset::new(
            vec![vec![0.2], vec![0.7]],
            vec![vec![0.3, -0.1], vec![-0.2, 0.4]],
        )
        .unwrap();
        let model = fit(&train, &KernelConfig::default()).unwrap();
        let sampler = PoolFrontierSampler::new(&model, &xs).unwrap();
        let values = sampler.draw_values(&mut rng);
        let expect = brute_force_nondominated(&values);
        let got = crate::nondominated_filter(&values).unwrap();
        assert_eq!(got.len(), expect.len());
    }

    #[test]
    fn fixed_seed_reproducible() {
        let data = Dataset::new(
            vec![vec![0.3], vec![0.6]],
            vec![vec![1.0, 2.0], vec![2.0, 1.0]],
        )
        .unwrap();
        let model = fit(&data, &KernelConfig::default()).unwrap();
        let xs: Vec<Vec<f64>> = (0..10).map(|i| vec![i as f64 / 9.0]).collect();
        let mut r1 = ChaCha8Rng::seed_from_u64(5);
        let mut r2 = ChaCha8Rng::seed_from_u64(5);
        let f1 = sample_frontier_pool(&model, &xs, &mut r1, 50).unwrap();
        let f2 = sample_frontier_pool(&model, &xs, &mut r2, 50).unwrap();
        assert_eq!(f1.points(), f2.points());
    }
}
