//! Seeded Monte Carlo and exact experiments.
//!
//! Sample `i` of an experiment draws its matrix from ChaCha8 stream `i` (or a
//! stream derived from `i` and the matrix size when one run covers several
//! sizes), so a report depends only on `(seed, samples, parameters)`. The shard
//! count changes how the sample range is split across workers, never the
//! numbers. Per-sample results are folded in sample order.

mod codim;
mod decay;
mod divisors;
mod exact;
mod maples;
mod partial;
mod report;
mod square;
pub mod stats;
mod suffix;

pub use codim::{codim_experiment, equidist_experiment, CODIM_CONSTANT};
pub use decay::{mode_decay_experiment, DEFAULT_DELTA_HAT};
pub use divisors::{
    divisor_growth_experiment, divisor_tail_experiment, minor_combination, pair_divisor_experiment,
    DIVISOR_GROWTH_CONSTANT, PRIME_COUNT_CONSTANT,
};
pub use exact::{exact_det_distribution, exact_square_probability, DetDistribution, EXACT_MAX_N};
pub use maples::maples_experiment;
pub use partial::partial_zero_experiment;
pub use report::{rational_string, round15, Estimate, ExperimentReport, Provenance};
pub use square::square_probability_experiment;
pub use suffix::{square_suffix_experiment, SquareSuffixSet, SuffixRun};

use crate::ensemble::{SignedTernaryMatrix, XiSampler};
use crate::exec::{map_sharded, Execution};

/// Sampling controls shared by every Monte Carlo experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    pub shards: usize,
    pub exec: Execution,
}

impl McConfig {
    pub fn new(samples: u64, seed: u64, shards: usize) -> Self {
        McConfig {
            samples,
            seed,
            shards: shards.max(1),
            exec: Execution::default(),
        }
    }

    pub fn with_exec(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    pub(crate) fn report(&self, name: &str) -> ExperimentReport {
        ExperimentReport::new(name, self.seed, self.shards, self.samples)
    }

    /// Runs `f` on every sample index with that sample's sampler.
    pub(crate) fn run<T, F>(&self, stream_base: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64, &mut XiSampler) -> T + Sync + Send,
    {
        let seed = self.seed;
        map_sharded(self.samples, self.shards, self.exec, |i| {
            let mut s = XiSampler::new(seed, stream_base + i);
            f(i, &mut s)
        })
    }

    /// Runs `f` on one freshly sampled `n x n` matrix per sample.
    pub(crate) fn run_matrices<T, F>(&self, n: usize, stream_base: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(&SignedTernaryMatrix) -> T + Sync + Send,
    {
        self.run(stream_base, |_, s| {
            let m = s.sample_matrix(n).expect("n >= 1 checked by caller");
            f(&m)
        })
    }
}

/// Stream offset separating matrix sizes within one multi-size run.
pub(crate) fn size_stream(n: usize) -> u64 {
    (n as u64) << 40
}

pub(crate) fn timed<F: FnOnce() -> crate::Result<ExperimentReport>>(f: F) -> crate::Result<ExperimentReport> {
    let start = std::time::Instant::now();
    let mut r = f()?;
    r.duration_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(r)
}
