use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use detsquare::arith::{divisor_count, factorize, mertens_sum, FactorBudget};
use detsquare::dist::{check_fourier_lemma, fourier_sweep, random_2_isolated_family, verify_2_isolated, IsolatedFamily};
use detsquare::ensemble::{Xi, XiSampler};
use detsquare::exactdet::{det, DetClass};
use detsquare::exec::{map_sharded, Execution};
use detsquare::experiments::*;

use crate::args::{Command, Output, Sampling};
use crate::matrix_file::{read_matrix_file, ParseError, ReadError};
use crate::output::emit;

/// Largest number of vectors a Fourier sweep may enumerate.
const SWEEP_CAP: u64 = 10_000_000;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Library(detsquare::Error),
    Matrix(ParseError),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Library(e) if e.is_resource_cap() => 3,
            CliError::Usage(_) | CliError::Library(_) | CliError::Matrix(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Library(e) if e.is_resource_cap() => write!(f, "resource cap: {e}"),
            CliError::Library(e) => e.fmt(f),
            CliError::Matrix(e) => write!(f, "malformed matrix file: {e}"),
            CliError::Io(e) => e.fmt(f),
        }
    }
}

impl From<detsquare::Error> for CliError {
    fn from(e: detsquare::Error) -> Self {
        CliError::Library(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn resolve_shards(flag: Option<usize>) -> Result<usize> {
    let shards = match flag {
        Some(s) => s,
        None => match std::env::var("DETSQUARE_SHARDS") {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("DETSQUARE_SHARDS must be a positive integer, got {v:?}")))?,
            Err(_) => std::thread::available_parallelism().map_or(1, |n| n.get()),
        },
    };
    if shards == 0 {
        return Err(CliError::Usage("shard count must be at least 1".into()));
    }
    Ok(shards)
}

fn config(s: &Sampling) -> Result<McConfig> {
    Ok(McConfig::new(s.samples, s.seed, resolve_shards(s.shards)?))
}

fn monte_carlo(s: &Sampling, f: impl FnOnce(&McConfig) -> detsquare::Result<ExperimentReport>) -> Result<()> {
    let report = f(&config(s)?)?;
    emit(&report, &s.output)?;
    Ok(())
}

fn timed(output: &Output, f: impl FnOnce() -> Result<ExperimentReport>) -> Result<()> {
    let start = Instant::now();
    let mut report = f()?;
    report.duration_ms = start.elapsed().as_secs_f64() * 1e3;
    emit(&report, output)?;
    Ok(())
}

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::SquareProb { n, sampling } => monte_carlo(&sampling, |c| square_probability_experiment(&n, c)),
        Command::ModeDecay { n, sampling } => monte_carlo(&sampling, |c| mode_decay_experiment(&n, c)),
        Command::Maples { n, p, sampling } => monte_carlo(&sampling, |c| maples_experiment(n, p, c)),
        Command::Divisors { n, sampling } => monte_carlo(&sampling, |c| divisor_growth_experiment(&n, c)),
        Command::PairDivisors { n, tau1, tau2, sampling } => {
            monte_carlo(&sampling, |c| pair_divisor_experiment(n, tau1, tau2, c))
        }
        Command::DivisorTail { n, k, sampling } => monte_carlo(&sampling, |c| divisor_tail_experiment(n, k, c)),
        Command::PartialZero { n, k, delta_hat, sampling } => monte_carlo(&sampling, |c| {
            partial_zero_experiment(n, k, delta_hat.unwrap_or(DEFAULT_DELTA_HAT), c)
        }),
        Command::SquareSuffix { n, k, sampling } => {
            monte_carlo(&sampling, |c| square_suffix_experiment(n, k, c).map(|run| run.report))
        }
        Command::Codim { n, p, sampling } => monte_carlo(&sampling, |c| codim_experiment(n, &p, c)),
        Command::Equidist { n, p, sampling } => monte_carlo(&sampling, |c| equidist_experiment(n, p, c)),
        Command::ExactSquareProb { n, output } => timed(&output, || exact_square(n)),
        Command::FourierCheck { a, max_len, range, output } => timed(&output, || match a {
            Some(a) => fourier_single(&a),
            None => fourier_sweep_report(max_len, range),
        }),
        Command::IsolatedCheck { k, family, max_size, sampling } => match family {
            Some(text) => timed(&sampling.output, || isolated_given(k, &text)),
            None => {
                let cfg = config(&sampling)?;
                timed(&sampling.output, || isolated_random(k, max_size.unwrap_or(4 * k), &cfg))
            }
        },
        Command::Mertens { n, output } => timed(&output, || mertens(n)),
        Command::Det { path, output } => timed(&output, || {
            let m = read_matrix_file(&path).map_err(|e| match e {
                ReadError::Io(e) => CliError::Io(e),
                ReadError::Parse(e) => CliError::Matrix(e),
            })?;
            determinant(&m, &path.display().to_string())
        }),
    }
}

fn exact_square(n: usize) -> Result<ExperimentReport> {
    let dist = exact_det_distribution(n)?;
    let square = exact_square_probability(n)?;
    let (max_prob, at) = dist.mode();
    let mut r = ExperimentReport::new("exact-square-prob", 0, 1, 0).param("n", n);
    r.push(Estimate::exact("p_square", &square));
    r.push(Estimate::exact("p_det_zero", &dist.prob(0)));
    r.push(Estimate::exact("max_point_prob", &max_prob));
    r.push(Estimate::count("mode_at_zero", u64::from(at.contains(&0))));
    Ok(r)
}

fn fourier_single(a: &[i64]) -> Result<ExperimentReport> {
    let check = check_fourier_lemma(a)?;
    let mut r = ExperimentReport::new("fourier-check", 0, 1, 1).param("a", a);
    r.push(Estimate::exact("p_zero", &check.p_zero));
    r.push(Estimate::exact("max_point_prob", &check.max_prob));
    r.push(Estimate::count("maximum_at_zero", u64::from(check.verdict)));
    Ok(r)
}

fn fourier_sweep_report(max_len: usize, range: i64) -> Result<ExperimentReport> {
    if range < 0 {
        return Err(CliError::Usage(format!("--range must be non-negative, got {range}")));
    }
    let width = (2 * range + 1) as u64;
    let total = (0..=max_len as u32).try_fold(0u64, |acc, len| acc.checked_add(width.checked_pow(len)?));
    if total.is_none_or(|t| t > SWEEP_CAP) {
        return Err(detsquare::Error::EnumerationCap {
            requested: max_len,
            cap: (SWEEP_CAP as f64).log(width as f64).floor() as usize,
        }
        .into());
    }
    let (checked, failures) = fourier_sweep(max_len, range, Execution::default())?;
    let mut r = ExperimentReport::new("fourier-check", 0, 1, checked)
        .param("max_len", max_len)
        .param("range", range)
        .param("failing_vectors", &failures);
    r.push(Estimate::count("vectors_checked", checked));
    r.push(Estimate::count("failures", failures.len() as u64));
    Ok(r)
}

fn parse_family(k: usize, text: &str) -> Result<Vec<Vec<Xi>>> {
    text.split(';')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .enumerate()
        .map(|(i, pattern)| {
            let v = pattern
                .split(',')
                .map(|t| {
                    let x: i64 = t.trim().parse().map_err(|_| {
                        CliError::Usage(format!("pattern {}: {:?} is not an integer", i + 1, t.trim()))
                    })?;
                    Ok(Xi::try_from_int(x)?)
                })
                .collect::<Result<Vec<Xi>>>()?;
            if v.len() != k {
                return Err(CliError::Usage(format!("pattern {} has length {}, expected {k}", i + 1, v.len())));
            }
            Ok(v)
        })
        .collect()
}

fn isolated_given(k: usize, text: &str) -> Result<ExperimentReport> {
    let family = IsolatedFamily::new(k, parse_family(k, text)?)?;
    let check = verify_2_isolated(&family);
    let members: Vec<Vec<i8>> = family.members().iter().map(|v| v.iter().map(|x| x.value()).collect()).collect();
    let mut r = ExperimentReport::new("isolated-check", 0, 1, 1)
        .param("k", k)
        .param("family", members);
    r.push(Estimate::count("size", family.len() as u64));
    r.push(Estimate::exact("mass", &check.mass));
    r.push(Estimate::exact("bound", &check.bound));
    r.push(Estimate::count("mass_within_bound", u64::from(check.verdict)));
    r.push(Estimate::count("balls_disjoint", u64::from(family.balls_disjoint())));
    Ok(r)
}

fn isolated_random(k: usize, max_size: usize, cfg: &McConfig) -> Result<ExperimentReport> {
    if k == 0 || max_size == 0 {
        return Err(CliError::Usage("isolated-check needs k >= 1 and --max-size >= 1".into()));
    }
    if cfg.samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    let outcomes = map_sharded(cfg.samples, cfg.shards, cfg.exec, |i| {
        let mut s = XiSampler::new(cfg.seed, i);
        let target = 1 + (s.next_u64() % max_size as u64) as usize;
        random_2_isolated_family(k, target, &mut s).map(|f| (f.len(), verify_2_isolated(&f), f.balls_disjoint()))
    });
    let (mut violations, mut overlapping) = (0u64, 0u64);
    let mut sizes = Vec::with_capacity(outcomes.len());
    let mut worst = BigRational::zero();
    for o in outcomes {
        let (size, check, disjoint) = o?;
        sizes.push(size as f64);
        violations += u64::from(!check.verdict);
        overlapping += u64::from(!disjoint);
        if check.mass > worst {
            worst = check.mass;
        }
    }
    let mut r = ExperimentReport::new("isolated-check", cfg.seed, cfg.shards, cfg.samples)
        .param("k", k)
        .param("max_size", max_size);
    r.push(Estimate::mean("mean_family_size", &sizes));
    r.push(Estimate::proportion("mass_violation_fraction", violations, cfg.samples));
    r.push(Estimate::proportion("overlapping_balls_fraction", overlapping, cfg.samples));
    r.push(Estimate::exact("max_mass", &worst));
    r.push(Estimate::exact("max_scaled_mass", &(worst * BigInt::from(k))));
    r.push(Estimate::exact("bound", &BigRational::new(1.into(), BigInt::from(k))));
    Ok(r)
}

fn mertens(n: u64) -> Result<ExperimentReport> {
    let sum = mertens_sum(n)?;
    let lnln = (n as f64).ln().ln();
    let mut r = ExperimentReport::new("mertens", 0, 1, 0).param("n", n);
    r.push(Estimate::exact("sum", &sum.exact));
    r.push(Estimate::count("prime_count", sum.prime_count as u64));
    r.push(Estimate::value("ln_ln_n", lnln));
    r.push(Estimate::value("ratio_to_ln_ln_n", sum.value / lnln));
    Ok(r)
}

fn determinant(m: &detsquare::ensemble::SignedTernaryMatrix, path: &str) -> Result<ExperimentReport> {
    let d = det(m);
    let mut r = ExperimentReport::new("det", 0, 1, 1).param("n", m.n()).param("path", path);
    let mut e = Estimate::value("det", d.to_f64().unwrap_or(f64::NAN));
    e.exact = Some(format!("{d}/1"));
    r.push(e);
    r.push(Estimate::count("is_square", u64::from(DetClass::of(&d).is_square())));
    if !d.is_zero() {
        let f = factorize(&d, FactorBudget::default())?;
        r.push(Estimate::count("tau", divisor_count(&f)?));
        r.push(Estimate::count("distinct_primes", f.distinct_primes() as u64));
    }
    Ok(r)
}
