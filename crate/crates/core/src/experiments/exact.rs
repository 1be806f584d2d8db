use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::is_perfect_square;
use crate::error::{Error, Result};

/// Largest dimension handled by exhaustive enumeration (`3^16` matrices at 4).
pub const EXACT_MAX_N: usize = 4;

/// Exact law of `det M` for tiny `n`: numerators over `4^(n²)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetDistribution {
    pub n: usize,
    pub numerators: BTreeMap<i64, u64>,
}

impl DetDistribution {
    fn denominator(&self) -> BigInt {
        BigInt::from(1u8) << (2 * self.n * self.n)
    }

    pub fn prob(&self, x: i64) -> BigRational {
        let c = self.numerators.get(&x).copied().unwrap_or(0);
        BigRational::new(BigInt::from(c), self.denominator())
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, BigRational)> + '_ {
        let den = self.denominator();
        self.numerators
            .iter()
            .map(move |(&v, &c)| (v, BigRational::new(BigInt::from(c), den.clone())))
    }

    /// Largest point probability and where it is attained.
    pub fn mode(&self) -> (BigRational, Vec<i64>) {
        let best = self.numerators.values().copied().max().unwrap_or(0);
        let at = self
            .numerators
            .iter()
            .filter(|(_, &c)| c == best)
            .map(|(&v, _)| v)
            .collect();
        (BigRational::new(BigInt::from(best), self.denominator()), at)
    }
}

fn small_det(rows: &[&[i8]], cols: &[usize]) -> i64 {
    match cols.len() {
        0 => 1,
        1 => rows[0][cols[0]] as i64,
        len => {
            let mut acc = 0;
            let mut rest = Vec::with_capacity(len - 1);
            for (pos, &c) in cols.iter().enumerate() {
                let entry = rows[0][c] as i64;
                if entry == 0 {
                    continue;
                }
                rest.clear();
                rest.extend(cols.iter().copied().filter(|&x| x != c));
                let sign = if pos % 2 == 0 { 1 } else { -1 };
                acc += sign * entry * small_det(&rows[1..], &rest);
            }
            acc
        }
    }
}

/// Exact distribution of `det M` by enumerating every weighted matrix.
///
/// Rows `2..n` are enumerated jointly; for each choice the first-row minors
/// are computed once and every first row is folded in by cofactor expansion.
pub fn exact_det_distribution(n: usize) -> Result<DetDistribution> {
    if n == 0 {
        return Err(Error::InvalidArgument("matrix dimension must be at least 1".into()));
    }
    if n > EXACT_MAX_N {
        return Err(Error::EnumerationCap {
            requested: n,
            cap: EXACT_MAX_N,
        });
    }
    // all rows with numerator 2^(zeros) over 4^n
    let rows: Vec<(Vec<i8>, u64)> = crate::ensemble::enumerate_weighted(n)?
        .map(|w| (w.pattern.iter().map(|x| x.value()).collect(), w.weight_num))
        .collect();
    let mut counts: BTreeMap<i64, u64> = BTreeMap::new();
    let lower = n - 1;
    let total = rows.len().pow(lower as u32);
    let all_cols: Vec<usize> = (0..n).collect();
    let mut chosen: Vec<&[i8]> = Vec::with_capacity(lower);
    let mut dense: BTreeMap<i64, u64> = BTreeMap::new();
    for idx in 0..total {
        chosen.clear();
        let mut rem = idx;
        let mut weight = 1u64;
        for _ in 0..lower {
            let (row, w) = &rows[rem % rows.len()];
            rem /= rows.len();
            chosen.push(row);
            weight *= w;
        }
        let minors: Vec<i64> = (0..n)
            .map(|i| {
                let cols: Vec<usize> = all_cols.iter().copied().filter(|&c| c != i).collect();
                small_det(&chosen, &cols)
            })
            .collect();
        dense.clear();
        for (first, w) in &rows {
            let det: i64 = first
                .iter()
                .zip(&minors)
                .enumerate()
                .map(|(i, (&r, &d))| if i % 2 == 0 { r as i64 * d } else { -(r as i64) * d })
                .sum();
            *dense.entry(det).or_insert(0) += w;
        }
        for (&det, &c) in &dense {
            *counts.entry(det).or_insert(0) += c * weight;
        }
    }
    Ok(DetDistribution {
        n,
        numerators: counts,
    })
}

/// `P(det M is a perfect square)`, exactly, for `n <= 4`. Zero counts as `0²`.
pub fn exact_square_probability(n: usize) -> Result<BigRational> {
    let dist = exact_det_distribution(n)?;
    Ok(dist
        .iter()
        .filter(|(v, _)| is_perfect_square(&BigInt::from(*v)))
        .fold(BigRational::zero(), |acc, (_, p)| acc + p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn tiny_values() {
        assert_eq!(exact_square_probability(1).unwrap(), r(3, 4));
        assert_eq!(exact_square_probability(2).unwrap(), r(25, 32));
        let d2 = exact_det_distribution(2).unwrap();
        assert_eq!(d2.prob(0), r(19, 32));
        assert_eq!(d2.prob(1), r(3, 16));
        assert_eq!(d2.mode(), (r(19, 32), vec![0]));
        assert!(exact_square_probability(5).is_err());
    }

    #[test]
    fn normalized_and_symmetric() {
        for n in 1..=3 {
            let d = exact_det_distribution(n).unwrap();
            let total: BigRational = d.iter().map(|(_, p)| p).sum();
            assert!(total.is_one());
            for (v, p) in d.iter() {
                assert_eq!(d.prob(-v), p);
            }
        }
    }
}
