use super::stats::fit_line;
use super::{exact_square_probability, size_stream, timed, Estimate, ExperimentReport, McConfig, EXACT_MAX_N};
use crate::error::{Error, Result};
use crate::exactdet::{classify_det, DetClass};

/// Monte Carlo `P(det M is a square)` for each `n`, with the exact value for
/// `n <= 4` and, across sizes, the fitted exponent `b` in `P ≈ a · n^b`.
///
/// A single size draws its matrices from streams `0..samples`; several sizes
/// use a separate block of streams per size.
pub fn square_probability_experiment(n_list: &[usize], cfg: &McConfig) -> Result<ExperimentReport> {
    if n_list.is_empty() || n_list.contains(&0) {
        return Err(Error::InvalidArgument("need one or more dimensions >= 1".into()));
    }
    if cfg.samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    timed(|| {
        let mut report = cfg.report("square-prob").param("n", n_list);
        let mut fit_points = Vec::new();
        for &n in n_list {
            let base = if n_list.len() == 1 { 0 } else { size_stream(n) };
            let outcomes = cfg.run_matrices(n, base, classify_det);
            let squares = outcomes.iter().filter(|c| c.is_square()).count() as u64;
            let zeros = outcomes.iter().filter(|&&c| c == DetClass::Zero).count() as u64;
            let est = Estimate::proportion(format!("p_square[n={n}]"), squares, cfg.samples);
            if squares > 0 {
                fit_points.push(((n as f64).ln(), est.value.ln()));
            }
            report.push(est);
            report.push(Estimate::proportion(format!("p_det_zero[n={n}]"), zeros, cfg.samples));
            if n <= EXACT_MAX_N {
                report.push(Estimate::exact(
                    format!("exact_p_square[n={n}]"),
                    &exact_square_probability(n)?,
                ));
            }
        }
        if fit_points.len() >= 2 {
            let (xs, ys): (Vec<f64>, Vec<f64>) = fit_points.into_iter().unzip();
            if let Some((_, slope)) = fit_line(&xs, &ys) {
                report.push(Estimate::value("fitted_exponent", slope));
            }
        }
        Ok(report)
    })
}
