//! Independent oracles for integration tests. Nothing here calls the
//! library's determinant, enumeration or distribution code.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Laplace expansion along the first row, skipping zero entries.
pub fn naive_det(rows: &[Vec<i64>]) -> i128 {
    let n = rows.len();
    let cols: Vec<usize> = (0..n).collect();
    laplace(rows, 0, &cols)
}

fn laplace(rows: &[Vec<i64>], r: usize, cols: &[usize]) -> i128 {
    if cols.is_empty() {
        return 1;
    }
    let mut acc = 0i128;
    for (pos, &c) in cols.iter().enumerate() {
        let a = rows[r][c];
        if a == 0 {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let sign = if pos % 2 == 0 { 1 } else { -1 };
        acc += sign * a as i128 * laplace(rows, r + 1, &rest);
    }
    acc
}

/// `P(0) = 1/2`, `P(±1) = 1/4` as a numerator over 4.
fn weight4(x: i64) -> u64 {
    if x == 0 {
        2
    } else {
        1
    }
}

/// Every `v ∈ {0,±1}^len` with its probability numerator over `4^len`.
pub fn all_patterns(len: usize) -> Vec<(Vec<i64>, u64)> {
    let mut out = vec![(Vec::new(), 1u64)];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|(v, w)| {
                [-1i64, 0, 1].into_iter().map(move |x| {
                    let mut v = v.clone();
                    v.push(x);
                    (v, w * weight4(x))
                })
            })
            .collect();
    }
    out
}

fn is_square_i128(d: i128) -> bool {
    if d < 0 {
        return false;
    }
    let r = (d as f64).sqrt() as i128;
    (r.saturating_sub(2)..=r + 2).any(|s| s >= 0 && s * s == d)
}

/// Exact `P(det M is a square)` by weighted enumeration of all `3^(n²)` matrices.
pub fn brute_square_probability(n: usize) -> BigRational {
    let mut hits = BigInt::from(0);
    for (v, w) in all_patterns(n * n) {
        let rows: Vec<Vec<i64>> = v.chunks(n).map(|c| c.to_vec()).collect();
        if is_square_i128(naive_det(&rows)) {
            hits += w;
        }
    }
    BigRational::new(hits, BigInt::from(4u8).pow((n * n) as u32))
}

/// Exact distribution of `Σ ξ_i a_i` as numerators over `4^len`.
pub fn brute_sum_distribution(a: &[i64]) -> BTreeMap<i64, u64> {
    let mut out = BTreeMap::new();
    for (v, w) in all_patterns(a.len()) {
        let s: i64 = v.iter().zip(a).map(|(x, y)| x * y).sum();
        *out.entry(s).or_insert(0) += w;
    }
    out
}

/// `1 - Π_{k=1..terms} (1 - p^-k)` by direct multiplication.
pub fn maples_partial_product(p: u64, terms: u32) -> f64 {
    let mut prod = 1.0f64;
    let mut pk = 1.0f64;
    for _ in 0..terms {
        pk /= p as f64;
        prod *= 1.0 - pk;
    }
    1.0 - prod
}
