use num_bigint::BigInt;
use num_rational::BigRational;

use super::stats::quantile;
use super::{timed, Estimate, ExperimentReport, McConfig};
use crate::arith::{is_prime_u64, ratio_to_f64};
use crate::dist::exact_sum_distribution_mod_p_big;
use crate::error::{Error, Result};
use crate::exactdet::{det_mod_p, second_order_minors, trailing_column_deficiency};

/// Number of leading columns dropped before ranking the trailing ones.
pub const TRAILING_OFFSET: usize = 3;

/// Upper bound on `P(deficiency >= 2) · p²` over `p ∈ {2, 3, 5, 7, 11}` at
/// `n = 20`. Measured maxima (10^4 samples, seeds 0..=4) lie in 0.03..0.05,
/// always at `p = 2`.
pub const CODIM_CONSTANT: f64 = 0.25;

fn check(n: usize, p: u64) -> Result<()> {
    if n < TRAILING_OFFSET + 1 {
        return Err(Error::InvalidArgument(format!("need n >= 4, got {n}")));
    }
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

/// Frequency of trailing-column rank deficiency `>= 2` over 𝔽_p, per prime.
///
/// Every deficient sample is rechecked for `p | d_1` and `p | d_2`; any
/// failure is counted in `divisibility_violations[p=P]`.
pub fn codim_experiment(n: usize, primes: &[u64], cfg: &McConfig) -> Result<ExperimentReport> {
    if primes.is_empty() {
        return Err(Error::InvalidArgument("no primes given".into()));
    }
    for &p in primes {
        check(n, p)?;
    }
    timed(|| {
        let mut report = cfg.report("codim").param("n", n).param("primes", primes);
        let rows: Vec<Result<Vec<(usize, bool)>>> = cfg.run_matrices(n, 0, |m| {
            primes
                .iter()
                .map(|&p| {
                    let r = trailing_column_deficiency(m, p, TRAILING_OFFSET)?;
                    let ok = if r.deficiency >= 2 {
                        det_mod_p(&m.delete(&[0], &[0]), p)? == 0
                            && det_mod_p(&m.delete(&[0], &[1]), p)? == 0
                    } else {
                        true
                    };
                    Ok((r.deficiency, ok))
                })
                .collect()
        });
        let rows: Vec<Vec<(usize, bool)>> = rows.into_iter().collect::<Result<_>>()?;
        let mut worst = 0.0f64;
        for (t, &p) in primes.iter().enumerate() {
            let at_least_two = rows.iter().filter(|r| r[t].0 >= 2).count() as u64;
            let exactly_one = rows.iter().filter(|r| r[t].0 == 1).count() as u64;
            let violations = rows.iter().filter(|r| !r[t].1).count() as u64;
            let freq = Estimate::proportion(format!("deficiency_ge2[p={p}]"), at_least_two, cfg.samples);
            let scaled = freq.value * (p * p) as f64;
            worst = worst.max(scaled);
            report.push(freq);
            report.push(Estimate::value(format!("scaled_by_p2[p={p}]"), scaled));
            report.push(Estimate::proportion(format!("deficiency_eq1[p={p}]"), exactly_one, cfg.samples));
            report.push(Estimate::count(format!("divisibility_violations[p={p}]"), violations));
        }
        report.push(Estimate::value("max_scaled_by_p2", worst));
        report.push(Estimate::value("codim_constant", CODIM_CONSTANT));
        Ok(report)
    })
}

/// Sup-deviation from uniform of `Σ_j (-1)^j ξ_j w_j mod p`, stratified by
/// trailing-column deficiency `0`, `1`, `>= 2`.
pub fn equidist_experiment(n: usize, p: u64, cfg: &McConfig) -> Result<ExperimentReport> {
    check(n, p)?;
    timed(|| {
        let mut report = cfg.report("equidist").param("n", n).param("p", p);
        let rows: Vec<Result<(usize, f64, bool)>> = cfg.run_matrices(n, 0, |m| {
            let coeffs = second_order_minors(m)?.signed();
            let dist = exact_sum_distribution_mod_p_big(&coeffs, p)?;
            let normalized = dist.total() == BigRational::from(BigInt::from(1));
            let dev = ratio_to_f64(&dist.sup_deviation_from_uniform()?);
            let deficiency = trailing_column_deficiency(m, p, TRAILING_OFFSET)?.deficiency;
            Ok((deficiency.min(2), dev, normalized))
        });
        let rows: Vec<(usize, f64, bool)> = rows.into_iter().collect::<Result<_>>()?;
        let all: Vec<f64> = rows.iter().map(|r| r.1).collect();
        report.push(Estimate::value("median_sup_deviation", quantile(&all, 0.5)));
        report.push(Estimate::value("p90_sup_deviation", quantile(&all, 0.9)));
        report.push(Estimate::value("degenerate_deviation", 1.0 - 1.0 / p as f64));
        for (stratum, label) in [(0, "0"), (1, "1"), (2, "ge2")] {
            let devs: Vec<f64> = rows.iter().filter(|r| r.0 == stratum).map(|r| r.1).collect();
            report.push(Estimate::count(format!("count[deficiency={label}]"), devs.len() as u64));
            if !devs.is_empty() {
                report.push(Estimate::value(format!("median_sup_deviation[deficiency={label}]"), quantile(&devs, 0.5)));
                report.push(Estimate::value(format!("p90_sup_deviation[deficiency={label}]"), quantile(&devs, 0.9)));
            }
        }
        let bad = rows.iter().filter(|r| !r.2).count() as u64;
        report.push(Estimate::count("normalization_failures", bad));
        Ok(report)
    })
}
