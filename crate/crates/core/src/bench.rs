//! Two strategies for running a chain of Kraus channels on a state:
//!
//! * (a) convert each channel to its R-matrix, multiply the chain into one
//!   matrix, apply it once;
//! * (b) apply the Kraus sums one channel at a time.
//!
//! Both are timed and their outputs compared. Timings are reported only.

use std::fmt;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::linalg::random::{random_density_matrix, rng_from_seed};
use crate::linalg::ComplexMatrix;
use crate::superop::{kraus_apply, kraus_to_r_closed_form, random_channel, KrausList};
use crate::vectorize::{column_stack, unstack, Basis, HsOperator};

/// Largest `dim` accepted, so that `dim * dim <= MAX_BENCH_DIM.pow(2)`.
pub const MAX_BENCH_DIM: usize = 64;

/// Agreement bound between the two strategies, relative to `‖result‖`.
pub const AGREEMENT_TOLERANCE: f64 = 1e-8;

pub const CSV_HEADER: &str =
    "dim,kraus_rank,chain_length,t_rmatrix_ns,t_nested_ns,max_deviation,seed";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchConfig {
    pub dim: usize,
    pub kraus_rank: usize,
    pub chain_length: usize,
    pub trials: usize,
    pub seed: u64,
}

impl BenchConfig {
    pub fn new(dim: usize, kraus_rank: usize, chain_length: usize) -> Self {
        Self {
            dim,
            kraus_rank,
            chain_length,
            trials: 9,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("dim", self.dim),
            ("kraus_rank", self.kraus_rank),
            ("chain_length", self.chain_length),
            ("trials", self.trials),
        ];
        for (name, value) in fields {
            if value == 0 {
                return Err(Error::InvalidArgument(format!("{name} must be positive")));
            }
        }
        if self.dim > MAX_BENCH_DIM {
            return Err(Error::DimensionOverflow {
                op: "run_bench",
                entries: self.dim * self.dim,
                limit: MAX_BENCH_DIM * MAX_BENCH_DIM,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub config: BenchConfig,
    /// Median over trials of strategy (a), in nanoseconds.
    pub t_rmatrix_ns: u128,
    /// Median over trials of strategy (b), in nanoseconds.
    pub t_nested_ns: u128,
    /// Largest entrywise difference between the two outputs over all trials.
    pub max_deviation: f64,
}

impl BenchReport {
    pub fn csv_row(&self) -> String {
        let c = &self.config;
        format!(
            "{},{},{},{},{},{:e},{}",
            c.dim,
            c.kraus_rank,
            c.chain_length,
            self.t_rmatrix_ns,
            self.t_nested_ns,
            self.max_deviation,
            c.seed
        )
    }
}

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.csv_row())
    }
}

/// Channel chain for a configuration; `chain[0]` acts first.
pub fn bench_chain(cfg: &BenchConfig) -> Vec<KrausList> {
    let mut rng = rng_from_seed(cfg.seed);
    (0..cfg.chain_length)
        .map(|_| random_channel(cfg.dim, cfg.kraus_rank, &mut rng))
        .collect()
}

/// Strategy (a): one R-matrix for the whole chain, applied once.
pub fn compose_via_r(chain: &[KrausList], state: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = state.rows();
    let basis = Basis::standard(d);
    let mut total = ComplexMatrix::identity(d * d);
    for list in chain {
        total = &kraus_to_r_closed_form(list, &basis)? * &total;
    }
    Ok(unstack(&(&total * &column_stack(state)), d, d))
}

/// Strategy (b): nested Kraus sums.
pub fn compose_nested(chain: &[KrausList], state: &ComplexMatrix) -> Result<ComplexMatrix> {
    let mut current = HsOperator::new(state.clone());
    for list in chain {
        current = kraus_apply(list, &current)?;
    }
    Ok(current.into_matrix())
}

fn median(mut xs: Vec<u128>) -> u128 {
    xs.sort_unstable();
    xs[xs.len() / 2]
}

/// Runs both strategies `trials` times on the same seeded inputs.
///
/// Fails with [`Error::Numerical`] if the outputs ever disagree by more than
/// `1e-8 · ‖result‖`.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport> {
    cfg.validate()?;
    let chain = bench_chain(cfg);
    let mut rng = rng_from_seed(cfg.seed.wrapping_add(1));
    let mut t_r = Vec::with_capacity(cfg.trials);
    let mut t_n = Vec::with_capacity(cfg.trials);
    let mut max_dev = 0.0f64;
    for _ in 0..cfg.trials {
        let state = random_density_matrix(cfg.dim, &mut rng);

        let start = Instant::now();
        let via_r = compose_via_r(&chain, &state)?;
        t_r.push(start.elapsed().as_nanos());

        let start = Instant::now();
        let nested = compose_nested(&chain, &state)?;
        t_n.push(start.elapsed().as_nanos());

        let dev = via_r.max_abs_diff(&nested);
        if dev > AGREEMENT_TOLERANCE * nested.frobenius_norm() {
            return Err(Error::Numerical(format!(
                "composition strategies disagree by {dev:e} (dim {}, chain {})",
                cfg.dim, cfg.chain_length
            )));
        }
        max_dev = max_dev.max(dev);
    }
    Ok(BenchReport {
        config: *cfg,
        t_rmatrix_ns: median(t_r),
        t_nested_ns: median(t_n),
        max_deviation: max_dev,
    })
}
