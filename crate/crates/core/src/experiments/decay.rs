use super::stats::fit_line;
use super::{exact_det_distribution, size_stream, timed, Estimate, ExperimentReport, McConfig, EXACT_MAX_N};
use crate::error::{Error, Result};
use crate::exactdet::det;
use num_traits::Zero;

/// Decay rate of `P(det M = 0)` in base 2 fitted by [`mode_decay_experiment`]
/// for `n ∈ {8, 10, 12, 14, 16}` with 10^5 samples per size, seed 0 (the fit
/// uses the upper half, `n ∈ {12, 14, 16}`, and gave 1.076).
pub const DEFAULT_DELTA_HAT: f64 = 1.08;

/// `P(det M = 0)` per `n`: exact (with the location of the mode) for `n <= 4`,
/// Monte Carlo above. The decay exponent `δ̂ = -slope` of `log2 P` against `n`
/// is fitted over the upper half of the sizes with a positive estimate (at
/// least two of them).
pub fn mode_decay_experiment(n_list: &[usize], cfg: &McConfig) -> Result<ExperimentReport> {
    if n_list.is_empty() || n_list.contains(&0) {
        return Err(Error::InvalidArgument("need one or more dimensions >= 1".into()));
    }
    timed(|| {
        let mut report = cfg.report("mode-decay").param("n", n_list);
        let mut points = Vec::new();
        for &n in n_list {
            let p_zero = if n <= EXACT_MAX_N {
                let dist = exact_det_distribution(n)?;
                let (mode_p, at) = dist.mode();
                let p0 = dist.prob(0);
                report.push(Estimate::exact(format!("p_det_zero[n={n}]"), &p0));
                report.push(Estimate::exact(format!("max_point_prob[n={n}]"), &mode_p));
                report.push(Estimate::value(
                    format!("mode_at_zero[n={n}]"),
                    if at.contains(&0) { 1.0 } else { 0.0 },
                ));
                report.value_of(&format!("p_det_zero[n={n}]"))
            } else {
                let zeros = cfg
                    .run_matrices(n, size_stream(n), |m| det(m).is_zero())
                    .into_iter()
                    .filter(|&z| z)
                    .count() as u64;
                let e = Estimate::proportion(format!("p_det_zero[n={n}]"), zeros, cfg.samples);
                let v = e.value;
                report.push(e);
                v
            };
            if p_zero > 0.0 {
                points.push((n, p_zero.log2()));
            }
        }
        points.sort_by_key(|p| p.0);
        let upper = &points[(points.len() / 2).min(points.len().saturating_sub(2))..];
        let xs: Vec<f64> = upper.iter().map(|p| p.0 as f64).collect();
        let ys: Vec<f64> = upper.iter().map(|p| p.1).collect();
        if let Some((_, slope)) = fit_line(&xs, &ys) {
            report.push(Estimate::value("delta_hat", -slope));
        }
        Ok(report)
    })
}
