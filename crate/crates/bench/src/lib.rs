//! Shared fixtures for the composition benchmarks.

use hsdual_core::bench::{bench_chain, BenchConfig};
use hsdual_core::linalg::random::{random_density_matrix, rng_from_seed};
use hsdual_core::{ComplexMatrix, KrausList};

/// `(dim, kraus_rank, chain_length)` triples measured by the benches.
pub const GRID: &[(usize, usize, usize)] = &[(2, 1, 1), (4, 4, 10), (8, 4, 20)];

/// A seeded channel chain and a seeded input state.
pub struct Fixture {
    pub config: BenchConfig,
    pub chain: Vec<KrausList>,
    pub state: ComplexMatrix,
}

impl Fixture {
    pub fn new(dim: usize, kraus_rank: usize, chain_length: usize, seed: u64) -> Self {
        let config = BenchConfig {
            seed,
            ..BenchConfig::new(dim, kraus_rank, chain_length)
        };
        let chain = bench_chain(&config);
        let state = random_density_matrix(dim, &mut rng_from_seed(seed.wrapping_add(1)));
        Self {
            config,
            chain,
            state,
        }
    }

    pub fn label(&self) -> String {
        let c = &self.config;
        format!("d{}_r{}_n{}", c.dim, c.kraus_rank, c.chain_length)
    }
}
