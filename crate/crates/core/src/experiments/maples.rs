use super::{timed, Estimate, ExperimentReport, McConfig};
use crate::arith::maples_limit;
use crate::error::{Error, Result};
use crate::exactdet::det_mod_p;

/// Frequency of `p | det M` against the limiting value `1 - Π (1 - p^-k)`.
pub fn maples_experiment(n: usize, p: u64, cfg: &McConfig) -> Result<ExperimentReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("matrix dimension must be at least 1".into()));
    }
    let limit = maples_limit(p, 1e-12)?;
    timed(|| {
        let mut report = cfg.report("maples").param("n", n).param("p", p);
        let hits = cfg
            .run_matrices(n, 0, |m| det_mod_p(m, p).expect("p checked prime") == 0)
            .into_iter()
            .filter(|&h| h)
            .count() as u64;
        let est = Estimate::proportion("p_divides_det", hits, cfg.samples);
        let gap = est.value - limit.value;
        report.push(est);
        report.push(Estimate::value("maples_limit", limit.value));
        report.push(Estimate::value("maples_truncation_error", limit.truncation_error));
        report.push(Estimate::value("difference", gap));
        Ok(report)
    })
}
