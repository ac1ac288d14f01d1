//! Multi-objective Bayesian optimization built around Pareto-frontier entropy
//! search (PFES), with analytic entropy evaluation over cell-partitioned
//! dominated regions, coupled and cost-sensitive decoupled query modes, and
//! the ParEGO / SMSego / MESMO / random baselines.

pub mod baselines;
pub mod benchmarks;
pub mod direct;
pub mod domain;
pub mod error;
pub mod entropy;
pub mod gp;
pub mod normal;
pub mod nsga2;
pub mod oracles;
pub mod pareto;
pub mod pool;
pub mod rfm;
pub mod runner;
pub mod sampling;
pub mod partition;

pub use domain::BoxDomain;
pub use error::{PfesError, Result};
pub use pareto::{dominates, nondominated_filter, ParetoFrontier};
pub use partition::{
    hypervolume, partition_2d, partition_qhv, refine_for_marginal, Cell, CellPartition,
    MarginalBreakpoints,
};
