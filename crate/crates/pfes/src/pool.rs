//! Discrete candidate pools: the pooled decoupled setting works on a fixed
//! list of inputs with known objective values. Pools are stored as delimited
//! text with a `x1..xd,f1..fL` header, and synthetic pools are generated
//! from smooth GP-prior draws to mirror the decoupled cost protocol.

use std::path::Path;

use rand::Rng;

use crate::domain::BoxDomain;
use crate::error::{PfesError, Result};
use crate::rfm::RfmSample;

/// A fixed candidate set with true objective values.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidatePool {
    inputs: Vec<Vec<f64>>,
    objectives: Vec<Vec<f64>>,
}

impl CandidatePool {
    pub fn new(inputs: Vec<Vec<f64>>, objectives: Vec<Vec<f64>>) -> Result<Self> {
        if inputs.len() != objectives.len() || inputs.is_empty() {
            return Err(PfesError::InvalidInput(
                "pool needs equal, nonzero numbers of inputs and objective rows".into(),
            ));
        }
        let d = inputs[0].len();
        let l = objectives[0].len();
        if d == 0 || l == 0 {
            return Err(PfesError::InvalidInput("pool rows must be nonempty".into()));
        }
        for (row, (x, f)) in inputs.iter().zip(&objectives).enumerate() {
            if x.len() != d || f.len() != l {
                return Err(PfesError::PoolSchema {
                    row: row + 1,
                    message: "ragged row".into(),
                });
            }
            if x.iter().chain(f.iter()).any(|v| !v.is_finite()) {
                return Err(PfesError::PoolSchema {
                    row: row + 1,
                    message: "non-finite value".into(),
                });
            }
        }
        // Duplicate inputs are rejected with the offending row number.
        let mut order: Vec<usize> = (0..inputs.len()).collect();
        order.sort_by(|&a, &b| {
            for (x, y) in inputs[a].iter().zip(&inputs[b]) {
                match x.total_cmp(y) {
                    std::cmp::Ordering::Equal => continue,
                    other => return other,
                }
            }
            std::cmp::Ordering::Equal
        });
        for w in order.windows(2) {
            if inputs[w[0]] == inputs[w[1]] {
                return Err(PfesError::PoolSchema {
                    row: w[0].max(w[1]) + 1,
                    message: "duplicate input row".into(),
                });
            }
        }
        Ok(Self { inputs, objectives })
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    pub fn dims(&self) -> usize {
        self.inputs[0].len()
    }

    pub fn objectives(&self) -> usize {
        self.objectives[0].len()
    }

    pub fn inputs(&self) -> &[Vec<f64>] {
        &self.inputs
    }

    pub fn objective_values(&self) -> &[Vec<f64>] {
        &self.objectives
    }

    /// Bounding box of the inputs, widened where degenerate, for unit-box
    /// rescaling.
    pub fn input_box(&self) -> BoxDomain {
        let d = self.dims();
        let mut lower = vec![f64::INFINITY; d];
        let mut upper = vec![f64::NEG_INFINITY; d];
        for x in &self.inputs {
            for i in 0..d {
                lower[i] = lower[i].min(x[i]);
                upper[i] = upper[i].max(x[i]);
            }
        }
        for i in 0..d {
            if upper[i] - lower[i] < 1e-12 {
                lower[i] -= 0.5;
                upper[i] += 0.5;
            }
        }
        BoxDomain::new(lower, upper).expect("finite pool bounds")
    }
}

/// Read a pool file: header `x1..xd,f1..fL`, one candidate per row.
pub fn load_pool<P: AsRef<Path>>(path: P) -> Result<CandidatePool> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path.as_ref())?;
    let headers = reader.headers()?.clone();
    let mut d = 0usize;
    let mut l = 0usize;
    for (i, name) in headers.iter().enumerate() {
        let expect_x = format!("x{}", i + 1);
        let expect_f = format!("f{}", i - d + 1);
        if l == 0 && name == expect_x {
            d += 1;
        } else if name == expect_f {
            l += 1;
        } else {
            return Err(PfesError::PoolSchema {
                row: 0,
                message: format!(
                    "unexpected header column '{name}' (want x1..xd then f1..fL)"
                ),
            });
        }
    }
    if d == 0 || l == 0 {
        return Err(PfesError::PoolSchema {
            row: 0,
            message: "header must contain x1..xd and f1..fL".into(),
        });
    }
    let mut inputs = Vec::new();
    let mut objectives = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let row = idx + 1;
        let record = record?;
        if record.len() != d + l {
            return Err(PfesError::PoolSchema {
                row,
                message: format!("expected {} fields, found {}", d + l, record.len()),
            });
        }
        let parse = |s: &str| -> Result<f64> {
            s.parse::<f64>().map_err(|_| PfesError::PoolSchema {
                row,
                message: format!("cannot parse '{s}' as a number"),
            })
        };
        let mut x = Vec::with_capacity(d);
        for i in 0..d {
            x.push(parse(&record[i])?);
        }
        let mut f = Vec::with_capacity(l);
        for i in d..d + l {
            f.push(parse(&record[i])?);
        }
        inputs.push(x);
        objectives.push(f);
    }
    CandidatePool::new(inputs, objectives)
}

/// Write a pool in the `x1..xd,f1..fL` format.
pub fn save_pool<P: AsRef<Path>>(pool: &CandidatePool, path: P) -> Result<()> {
    let mut writer = csv::Writer::from_path(path.as_ref())?;
    let mut header = Vec::new();
    for i in 0..pool.dims() {
        header.push(format!("x{}", i + 1));
    }
    for i in 0..pool.objectives() {
        header.push(format!("f{}", i + 1));
    }
    writer.write_record(&header)?;
    for (x, f) in pool.inputs().iter().zip(pool.objective_values()) {
        let row: Vec<String> = x.iter().chain(f.iter()).map(|v| format!("{v}")).collect();
        writer.write_record(&row)?;
    }
    writer.flush()?;
    Ok(())
}

/// Generator settings for synthetic pools.
#[derive(Debug, Clone)]
pub struct SyntheticPoolConfig {
    pub size: usize,
    pub dims: usize,
    pub objectives: usize,
    /// Lengthscale of the GP-prior draws the objectives come from.
    pub lengthscale: f64,
    pub features: usize,
}

impl SyntheticPoolConfig {
    /// Preset mirroring the smaller pooled dataset size (335 candidates).
    pub fn small() -> Self {
        Self {
            size: 335,
            dims: 3,
            objectives: 2,
            lengthscale: 0.3,
            features: 256,
        }
    }

    /// Preset mirroring the larger pooled dataset size (1119 candidates).
    pub fn large() -> Self {
        Self {
            size: 1119,
            dims: 6,
            objectives: 2,
            lengthscale: 0.4,
            features: 256,
        }
    }
}

/// Sample a pool: uniform unique inputs in the unit box, objectives from
/// independent smooth GP-prior draws.
pub fn make_synthetic_pool<R: Rng + ?Sized>(
    cfg: &SyntheticPoolConfig,
    rng: &mut R,
) -> CandidatePool {
    let sample = RfmSample::prior(cfg.dims, cfg.objectives, cfg.lengthscale, cfg.features, rng);
    let mut inputs: Vec<Vec<f64>> = Vec::with_capacity(cfg.size);
    while inputs.len() < cfg.size {
        let x: Vec<f64> = (0..cfg.dims).map(|_| rng.gen_range(0.0..1.0)).collect();
        if !inputs.contains(&x) {
            inputs.push(x);
        }
    }
    let objectives: Vec<Vec<f64>> = inputs.iter().map(|x| sample.evaluate(x)).collect();
    CandidatePool::new(inputs, objectives).expect("generated pool is valid")
}
