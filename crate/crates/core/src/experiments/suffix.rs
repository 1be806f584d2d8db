use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{timed, Estimate, ExperimentReport, McConfig};
use crate::arith::{is_perfect_square, ratio_to_f64};
use crate::dist::{is_2_isolated, pattern_mass};
use crate::ensemble::{enumerate_weighted, SignedTernaryMatrix, Xi};
use crate::error::{Error, Result};
use crate::exactdet::first_row_minors;

/// Largest suffix length swept exhaustively.
pub const SUFFIX_MAX_K: usize = 10;

const EXEMPLARS: usize = 16;

/// Suffixes of the first row that complete `M` to a square determinant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareSuffixSet {
    pub k: usize,
    /// The sampled matrix; its first-row suffix is the one drawn, not a member.
    pub matrix: SignedTernaryMatrix,
    /// First `n - k` entries of the first row.
    pub prefix: Vec<i8>,
    pub members: Vec<Vec<Xi>>,
    pub is_2_isolated: bool,
    /// Exact `P(ξ ∈ E)` for `ξ` of length `k`.
    pub mass: BigRational,
}

impl SquareSuffixSet {
    /// `M` with its last `k` first-row entries replaced by `suffix`.
    pub fn completed(&self, suffix: &[Xi]) -> SignedTernaryMatrix {
        let n = self.matrix.n();
        let mut m = self.matrix.clone();
        for (t, &x) in suffix.iter().enumerate() {
            m.set(0, n - self.k + t, x);
        }
        m
    }
}

#[derive(Debug, Clone)]
pub struct SuffixRun {
    pub report: ExperimentReport,
    /// The first nonempty sets, followed by every 2-isolated set with mass above `1/k`.
    pub exemplars: Vec<SquareSuffixSet>,
}

/// Builds, for each sampled `M`, the set `E ⊂ {0,±1}^k` of first-row suffixes
/// giving a square determinant (the determinant is linear in the first row,
/// so every completion is one cofactor expansion over the same minors).
pub fn square_suffix_experiment(n: usize, k: usize, cfg: &McConfig) -> Result<SuffixRun> {
    if k == 0 || k > SUFFIX_MAX_K || k > n || n < 2 {
        return Err(Error::InvalidArgument(format!(
            "need 2 <= n, 1 <= k <= min(n, {SUFFIX_MAX_K}), got n = {n}, k = {k}"
        )));
    }
    let patterns: Vec<Vec<Xi>> = enumerate_weighted(k)?.map(|w| w.pattern).collect();
    let bound = BigRational::new(1.into(), BigInt::from(k));
    let mut exemplars = Vec::new();
    let report = timed(|| {
        let mut report = cfg.report("square-suffix").param("n", n).param("k", k);
        let sets: Vec<SquareSuffixSet> = cfg.run_matrices(n, 0, |m| {
            let d = first_row_minors(m).expect("n >= 2").d;
            let sign = |i: usize| if i % 2 == 0 { 1i64 } else { -1 };
            let base = (0..n - k).fold(BigInt::zero(), |acc, i| {
                acc + &d[i] * (sign(i) * m.get(0, i) as i64)
            });
            let members: Vec<Vec<Xi>> = patterns
                .iter()
                .filter(|s| {
                    let det = s.iter().enumerate().fold(base.clone(), |acc, (t, x)| {
                        let i = n - k + t;
                        acc + &d[i] * (sign(i) * x.value() as i64)
                    });
                    is_perfect_square(&det)
                })
                .cloned()
                .collect();
            SquareSuffixSet {
                k,
                matrix: m.clone(),
                prefix: m.row(0)[..n - k].to_vec(),
                is_2_isolated: is_2_isolated(&members),
                mass: pattern_mass(&members, k),
                members,
            }
        });

        let samples = cfg.samples;
        let empty = sets.iter().filter(|s| s.members.is_empty()).count() as u64;
        let not_isolated = sets.iter().filter(|s| !s.is_2_isolated).count() as u64;
        let isolated = samples - not_isolated;
        let violations: Vec<&SquareSuffixSet> = sets
            .iter()
            .filter(|s| s.is_2_isolated && s.mass > bound)
            .collect();
        let sizes: Vec<f64> = sets.iter().map(|s| s.members.len() as f64).collect();
        let masses: Vec<f64> = sets.iter().map(|s| ratio_to_f64(&s.mass)).collect();
        let total = sets.iter().fold(BigRational::zero(), |acc, s| acc + &s.mass);
        let mean_mass = total / BigRational::from(BigInt::from(samples));
        let max_isolated_mass = sets
            .iter()
            .filter(|s| s.is_2_isolated)
            .map(|s| s.mass.clone())
            .max()
            .unwrap_or_else(BigRational::zero);

        report.push(Estimate::mean("mean_set_size", &sizes));
        report.push(Estimate::proportion("empty_fraction", empty, samples));
        report.push(Estimate::proportion("not_2_isolated_fraction", not_isolated, samples));
        let mut mm = Estimate::mean("mean_mass", &masses);
        mm.exact = Some(super::rational_string(&mean_mass));
        report.push(mm);
        report.push(Estimate::exact("max_isolated_mass", &max_isolated_mass));
        report.push(Estimate::exact("isolated_bound", &bound));
        report.push(Estimate::count("isolated_sets", isolated));
        report.push(Estimate::count("isolated_violations", violations.len() as u64));

        exemplars.extend(
            sets.iter()
                .filter(|s| !s.members.is_empty())
                .take(EXEMPLARS)
                .cloned(),
        );
        exemplars.extend(violations.into_iter().cloned());
        Ok(report)
    })?;
    Ok(SuffixRun { report, exemplars })
}
