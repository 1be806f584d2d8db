use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::stats::quantile;
use super::{timed, Estimate, ExperimentReport, McConfig};
use crate::arith::ratio_to_f64;
use crate::dist::exact_sum_distribution;
use crate::error::{Error, Result};
use crate::exactdet::first_row_minors;

/// Largest dimension for which the inner probability is computed exactly.
pub const PARTIAL_ZERO_MAX_N: usize = 14;

/// For each sampled `M`, the exact probability `P_ξ(Σ_{i<=n-k} ξ_i d_i = 0)`
/// with `ξ` independent of `M`.
///
/// Reports the exact mean over samples, quantiles, the frequency of
/// `inner > 2^{-n δ̂ / 2}`, the reference `2^{k - δ̂ n}`, and the count of
/// samples where the inner probability falls below `(1/2)^{n-k}`, the mass of
/// the all-zero `ξ` (always zero).
pub fn partial_zero_experiment(n: usize, k: usize, delta_hat: f64, cfg: &McConfig) -> Result<ExperimentReport> {
    if !(2..=PARTIAL_ZERO_MAX_N).contains(&n) || k >= n {
        return Err(Error::InvalidArgument(format!(
            "need 2 <= n <= {PARTIAL_ZERO_MAX_N} and k < n, got n = {n}, k = {k}"
        )));
    }
    let cutoff = (-(n as f64) * delta_hat / 2.0).exp2();
    timed(|| {
        let mut report = cfg
            .report("partial-zero")
            .param("n", n)
            .param("k", k)
            .param("delta_hat", delta_hat);
        let inner: Vec<Result<BigRational>> = cfg.run_matrices(n, 0, |m| {
            let d = first_row_minors(m)?;
            let coeffs: Vec<i64> = d.d[..n - k]
                .iter()
                .map(|x| x.to_i64().expect("minor of a 13x13 ternary matrix fits i64"))
                .collect();
            Ok(exact_sum_distribution(&coeffs)?.prob(0))
        });
        let inner: Vec<BigRational> = inner.into_iter().collect::<Result<_>>()?;
        let floor = BigRational::new(1.into(), BigInt::from(1u8) << (n - k));
        let total = inner.iter().fold(BigRational::zero(), |acc, p| acc + p);
        let mean = total / BigRational::from(BigInt::from(cfg.samples));
        let values: Vec<f64> = inner.iter().map(ratio_to_f64).collect();
        let above = values.iter().filter(|&&v| v > cutoff).count() as u64;
        let below_floor = inner.iter().filter(|p| **p < floor).count() as u64;

        let mut mean_est = Estimate::mean("mean_inner_probability", &values);
        mean_est.exact = Some(super::rational_string(&mean));
        report.push(mean_est);
        report.push(Estimate::value("median_inner_probability", quantile(&values, 0.5)));
        report.push(Estimate::value("p90_inner_probability", quantile(&values, 0.9)));
        report.push(Estimate::proportion("frequency_above_cutoff", above, cfg.samples));
        report.push(Estimate::value("cutoff", cutoff));
        report.push(Estimate::value(
            "reference_bound",
            (k as f64 - delta_hat * n as f64).exp2(),
        ));
        report.push(Estimate::count("below_all_zero_floor", below_floor));
        Ok(report)
    })
}
