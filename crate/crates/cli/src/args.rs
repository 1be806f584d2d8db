use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "detsquare",
    version,
    about = "Experiments on whether the determinant of a random {0,±1} matrix is a perfect square",
    long_about = "Experiments on whether the determinant of a random {0,±1} matrix is a perfect square.\n\n\
                  Entries are i.i.d. with P(0) = 1/2 and P(±1) = 1/4. Every report is a JSON object \
                  (or CSV, one row per estimate) carrying the parameters and the seed, shard count, \
                  sample count and version needed to reproduce it."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Output controls shared by every subcommand.
#[derive(Debug, Args)]
pub struct Output {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

/// Sampling controls for Monte Carlo subcommands.
#[derive(Debug, Args)]
pub struct Sampling {
    /// Seed of the sample streams.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Number of work shards [default: available parallelism, or $DETSQUARE_SHARDS].
    #[arg(long)]
    pub shards: Option<usize>,

    /// Number of sampled matrices (or families) per size.
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,

    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo P(det M is a square) for one or more sizes.
    SquareProb {
        /// Matrix sizes, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Exact P(det M is a square), P(det M = 0) and the mode, by enumeration (n <= 4).
    ExactSquareProb {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: Output,
    },
    /// P(det M = 0) per size and the fitted decay rate.
    ModeDecay {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Empirical P(p | det M) against the Maples limit.
    Maples {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Divisor count and distinct prime count of det M.
    Divisors {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Divisor count of tau1·d_1 + tau2·d_2 for the first two first-row minors.
    PairDivisors {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        tau1: i64,
        #[arg(long, allow_negative_numbers = true)]
        tau2: i64,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Frequency of τ(2 d_j) > e^√n among the last k first-row minors.
    DivisorTail {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Exact P(Σ_{i<=n-k} ξ_i d_i = 0) per sampled matrix.
    PartialZero {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Decay rate used for the cutoff 2^(-n·δ/2) [default: the recorded fit].
        #[arg(long)]
        delta_hat: Option<f64>,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// First-row suffixes of length k that make det M a square.
    SquareSuffix {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Rank deficiency of the trailing columns over F_p.
    Codim {
        #[arg(long)]
        n: usize,
        /// Primes, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "2,3,5,7,11")]
        p: Vec<u64>,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Distance from uniform of Σ (-1)^j ξ_j w_j mod p.
    Equidist {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Checks that P(Σ ξ_i a_i = x) is largest at x = 0.
    FourierCheck {
        /// A single coefficient vector, comma separated; otherwise sweep.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        a: Option<Vec<i64>>,
        /// Sweep every vector of length <= max-len ...
        #[arg(long, default_value_t = 5)]
        max_len: usize,
        /// ... with entries in [-range, range].
        #[arg(long, default_value_t = 2)]
        range: i64,
        #[command(flatten)]
        output: Output,
    },
    /// ξ-mass against 1/k for 2-isolated families in {0,±1}^k.
    IsolatedCheck {
        #[arg(long)]
        k: usize,
        /// Check this family (patterns separated by ';', entries by ','),
        /// instead of `--samples` random ones.
        #[arg(long, allow_hyphen_values = true)]
        family: Option<String>,
        /// Largest target size of random families [default: 4k].
        #[arg(long)]
        max_size: Option<usize>,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Exact Σ 1/p over primes p <= n.
    Mertens {
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Determinant, square verdict and divisor count of a matrix file.
    Det {
        /// First line n, then n rows of n entries from {-1, 0, 1}.
        path: PathBuf,
        #[command(flatten)]
        output: Output,
    },
}
