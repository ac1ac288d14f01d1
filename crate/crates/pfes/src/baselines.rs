//! Baseline acquisition functions sharing the surrogate infrastructure:
//! ParEGO (augmented Tchebycheff scalarization + expected improvement),
//! SMSego (optimistic hypervolume gain), MESMO (per-dimension max-value
//! entropy), and uniform random scoring.

use rand::Rng;
use rand_distr::{Distribution, Exp1};

use crate::error::{PfesError, Result};
use crate::gp::PredictiveDistribution;
use crate::normal;
use crate::pareto::ParetoFrontier;
use crate::partition::hypervolume;

/// Simplex weights and the augmentation constant of the augmented
/// Tchebycheff scalarization.
#[derive(Debug, Clone)]
pub struct ScalarizationWeights {
    pub weights: Vec<f64>,
    pub rho: f64,
}

impl ScalarizationWeights {
    pub fn new(weights: Vec<f64>, rho: f64) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if weights.iter().any(|w| *w < 0.0) || (sum - 1.0).abs() > 1e-9 {
            return Err(PfesError::InvalidInput(
                "weights must be nonnegative and sum to 1".into(),
            ));
        }
        Ok(Self { weights, rho })
    }

    /// Uniform draw from the simplex (normalized exponentials).
    pub fn sample<R: Rng + ?Sized>(objectives: usize, rho: f64, rng: &mut R) -> Self {
        let mut w: Vec<f64> = (0..objectives).map(|_| Exp1.sample(rng)).collect();
        let sum: f64 = w.iter().sum();
        for v in &mut w {
            *v /= sum;
        }
        Self { weights: w, rho }
    }
}

/// Augmented Tchebycheff scalarization of normalized (maximization-oriented)
/// objectives: `max_l w_l f_l + rho Σ_l w_l f_l`.
pub fn augmented_tchebycheff(f_normalized: &[f64], w: &ScalarizationWeights) -> f64 {
    let weighted = f_normalized.iter().zip(&w.weights).map(|(f, wl)| f * wl);
    let max = weighted.clone().fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = weighted.sum();
    max + w.rho * sum
}

/// Per-objective min-max normalization to [0,1] over the given observations,
/// returning the normalized rows and the (min, span) used.
pub fn normalize_objectives(values: &[Vec<f64>]) -> (Vec<Vec<f64>>, Vec<(f64, f64)>) {
    assert!(!values.is_empty());
    let dims = values[0].len();
    let mut min = vec![f64::INFINITY; dims];
    let mut max = vec![f64::NEG_INFINITY; dims];
    for v in values {
        for l in 0..dims {
            min[l] = min[l].min(v[l]);
            max[l] = max[l].max(v[l]);
        }
    }
    let bounds: Vec<(f64, f64)> = (0..dims)
        .map(|l| {
            let span = max[l] - min[l];
            (min[l], if span < 1e-12 { 0.0 } else { span })
        })
        .collect();
    let normalized = values
        .iter()
        .map(|v| {
            v.iter()
                .zip(&bounds)
                .map(|(x, (lo, span))| if *span == 0.0 { 0.5 } else { (x - lo) / span })
                .collect()
        })
        .collect();
    (normalized, bounds)
}

/// Expected improvement of a Gaussian over `incumbent` (maximization).
pub fn expected_improvement(mean: f64, stddev: f64, incumbent: f64) -> f64 {
    if stddev < 1e-12 {
        return (mean - incumbent).max(0.0);
    }
    let z = (mean - incumbent) / stddev;
    ((mean - incumbent) * normal::cdf(z) + stddev * normal::pdf(z)).max(0.0)
}

/// ParEGO acquisition: expected improvement of the scalarized surrogate.
/// `pred` is the predictive of the single-objective GP fitted to the
/// Tchebycheff-scalarized data and `incumbent` the best scalarized value.
pub fn parego_acquisition(pred: &PredictiveDistribution, incumbent: f64) -> f64 {
    assert_eq!(pred.objectives(), 1, "ParEGO uses a scalarized model");
    expected_improvement(pred.mean[0], pred.stddev[0], incumbent)
}

/// SMSego confidence coefficient `Φ^{-1}(0.5 + 1/2^L)`.
pub fn smsego_beta(objectives: usize) -> f64 {
    normal::quantile(0.5 + 0.5f64.powi(objectives as i32))
}

/// SMSego acquisition: hypervolume gain of the optimistic point
/// `μ(x) + β σ(x)` over the observed frontier.
pub fn smsego_acquisition(
    pred: &PredictiveDistribution,
    observed_frontier: &ParetoFrontier,
    reference: &[f64],
) -> f64 {
    let beta = smsego_beta(pred.objectives());
    let optimistic: Vec<f64> = pred
        .mean
        .iter()
        .zip(&pred.stddev)
        .map(|(m, s)| m + beta * s)
        .collect();
    if observed_frontier.dominates_point(&optimistic) {
        return 0.0;
    }
    let base = hypervolume(observed_frontier, reference);
    let mut points = observed_frontier.points().to_vec();
    points.push(optimistic);
    let extended = crate::pareto::nondominated_filter(&points).expect("finite points");
    (hypervolume(&extended, reference) - base).max(0.0)
}

/// MESMO acquisition: mean over sampled frontiers of the per-dimension
/// max-value truncated-entropy reduction
/// `Σ_l [γ_l φ(γ_l) / (2Φ(γ_l)) − log Φ(γ_l)]` with `Φ` floored at 1e-12.
pub fn mesmo_acquisition(pred: &PredictiveDistribution, frontiers: &[ParetoFrontier]) -> f64 {
    assert!(!frontiers.is_empty(), "need at least one sampled frontier");
    let dims = pred.objectives();
    let mut total = 0.0;
    for frontier in frontiers {
        for l in 0..dims {
            let max_l = frontier
                .points()
                .iter()
                .map(|p| p[l])
                .fold(f64::NEG_INFINITY, f64::max);
            let gamma = (max_l - pred.mean[l]) / pred.stddev[l];
            let cdf = normal::cdf(gamma).max(1e-12);
            total += gamma * normal::pdf(gamma) / (2.0 * cdf) - cdf.ln();
        }
    }
    total / frontiers.len() as f64
}

/// Uniform random score in [0, 1).
pub fn random_acquisition<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.gen::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nondominated_filter;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    #[test]
    fn tchebycheff_formula_example() {
        let w = ScalarizationWeights::new(vec![0.5, 0.5], 0.05).unwrap();
        let s = augmented_tchebycheff(&[0.2, 0.8], &w);
        assert_abs_diff_eq!(s, 0.4 + 0.025, epsilon = 1e-12);
    }

    #[test]
    fn tchebycheff_is_dominance_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        use rand::Rng;
        for _ in 0..200 {
            let w = ScalarizationWeights::sample(3, 0.05, &mut rng);
            let f: Vec<f64> = (0..3).map(|_| rng.gen_range(0.0..1.0)).collect();
            let g: Vec<f64> = f.iter().map(|v| v - rng.gen_range(0.0..0.3)).collect();
            assert!(augmented_tchebycheff(&f, &w) >= augmented_tchebycheff(&g, &w));
        }
    }

    #[test]
    fn ei_vanishes_for_hopeless_points() {
        assert_eq!(expected_improvement(-5.0, 1e-15, 0.0), 0.0);
        assert!(expected_improvement(0.0, 1.0, 0.0) > 0.0);
    }

    #[test]
    fn ei_matches_monte_carlo() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (mean, sd, inc) = (0.3, 0.7, 0.5);
        let n = 100_000;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..n {
            let z: f64 = StandardNormal.sample(&mut rng);
            let imp = (mean + sd * z - inc).max(0.0);
            sum += imp;
            sum_sq += imp * imp;
        }
        let mc = sum / n as f64;
        let se = ((sum_sq / n as f64 - mc * mc) / n as f64).sqrt();
        let analytic = expected_improvement(mean, sd, inc);
        assert!((analytic - mc).abs() < 3.0 * se, "EI {analytic} vs MC {mc} ± {se}");
    }

    #[test]
    fn smsego_beta_for_two_objectives() {
        assert_abs_diff_eq!(smsego_beta(2), 0.674_489_750_196_081_7, epsilon = 1e-9);
    }

    #[test]
    fn smsego_zero_gain_when_dominated() {
        let front = nondominated_filter(&[vec![1.0, 1.0]]).unwrap();
        let pred = PredictiveDistribution::new(vec![0.0, 0.0], vec![0.1, 0.1]);
        assert_eq!(smsego_acquisition(&pred, &front, &[-1.0, -1.0]), 0.0);
    }

    #[test]
    fn smsego_gain_matches_mc_volume_difference() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let front =
            nondominated_filter(&[vec![0.5, 1.5], vec![1.5, 0.5], vec![1.0, 1.0]]).unwrap();
        let pred = PredictiveDistribution::new(vec![1.4, 1.2], vec![0.3, 0.2]);
        let reference = vec![0.0, 0.0];
        let gain = smsego_acquisition(&pred, &front, &reference);
        assert!(gain > 0.0);
        let beta = smsego_beta(2);
        let optimistic: Vec<f64> = pred
            .mean
            .iter()
            .zip(&pred.stddev)
            .map(|(m, s)| m + beta * s)
            .collect();
        let mut pts = front.points().to_vec();
        pts.push(optimistic);
        let union = nondominated_filter(&pts).unwrap();
        let (v1, se1) = crate::oracles::hypervolume_mc(&union, &reference, 400_000, &mut rng);
        let (v0, se0) = crate::oracles::hypervolume_mc(&front, &reference, 400_000, &mut rng);
        let se = (se0 * se0 + se1 * se1).sqrt();
        assert!(
            (gain - (v1 - v0)).abs() < 3.0 * se,
            "gain {gain} vs MC {} ± {se}",
            v1 - v0
        );
    }

    #[test]
    fn smsego_gain_nonnegative_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        use rand::Rng;
        for _ in 0..100 {
            let pts: Vec<Vec<f64>> = (0..8)
                .map(|_| (0..2).map(|_| rng.gen_range(0.0..1.0)).collect())
                .collect();
            let front = nondominated_filter(&pts).unwrap();
            let pred = PredictiveDistribution::new(
                vec![rng.gen_range(-0.5..1.5), rng.gen_range(-0.5..1.5)],
                vec![rng.gen_range(0.01..0.5), rng.gen_range(0.01..0.5)],
            );
            assert!(smsego_acquisition(&pred, &front, &[-1.0, -1.0]) >= 0.0);
        }
    }

    #[test]
    fn mesmo_gamma_zero_contributes_log_two() {
        // One dimension exactly at its max value, the other far above: the
        // far dimension contributes ~0, the tight one log 2.
        let front = nondominated_filter(&[vec![0.0, 100.0]]).unwrap();
        let pred = PredictiveDistribution::new(vec![0.0, 0.0], vec![1.0, 1.0]);
        let v = mesmo_acquisition(&pred, &[front]);
        assert_abs_diff_eq!(v, std::f64::consts::LN_2, epsilon = 1e-9);
    }

    #[test]
    fn mesmo_vanishes_without_truncation() {
        let front = nondominated_filter(&[vec![100.0, 100.0]]).unwrap();
        let pred = PredictiveDistribution::new(vec![0.0, 0.0], vec![1.0, 1.0]);
        assert_abs_diff_eq!(mesmo_acquisition(&pred, &[front]), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn mesmo_matches_truncated_entropy_quadrature() {
        // Per-dimension value equals H[N] - H[truncated N at max] by 1D
        // quadrature of -q log q for the upper-truncated Gaussian.
        let max_l = 0.8;
        let (mu, sd) = (0.2, 0.9);
        let gamma = (max_l - mu) / sd;
        let z = normal::cdf(gamma);
        let h_trunc = crate::oracles::integrate(
            &|x| {
                // standardized density of N truncated to (-inf, gamma]
                let q = normal::pdf(x) / z;
                -q * (q.ln() - sd.ln())
            },
            -9.0,
            gamma,
        );
        let h_full = 0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E).ln() + sd.ln();
        let front = nondominated_filter(&[vec![max_l]]).unwrap();
        let pred = PredictiveDistribution::new(vec![mu], vec![sd]);
        let v = mesmo_acquisition(&pred, &[front]);
        assert_abs_diff_eq!(v, h_full - h_trunc, epsilon = 1e-6);
    }

    #[test]
    fn mesmo_nonnegative_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        use rand::Rng;
        for _ in 0..200 {
            let front = nondominated_filter(&[vec![
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
            ]])
            .unwrap();
            let pred = PredictiveDistribution::new(
                vec![rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)],
                vec![rng.gen_range(0.05..2.0), rng.gen_range(0.05..2.0)],
            );
            assert!(mesmo_acquisition(&pred, &[front]) >= 0.0);
        }
    }

    #[test]
    fn random_scores_are_uniform_and_reproducible() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let draws: Vec<f64> = (0..10_000).map(|_| random_acquisition(&mut rng)).collect();
        assert!(draws.iter().all(|v| (0.0..1.0).contains(v)));
        let mean: f64 = draws.iter().sum::<f64>() / draws.len() as f64;
        assert!((mean - 0.5).abs() < 0.02, "mean {mean}");
        let mut rng2 = ChaCha8Rng::seed_from_u64(6);
        let again: Vec<f64> = (0..10_000).map(|_| random_acquisition(&mut rng2)).collect();
        assert_eq!(draws, again);
    }
}
