use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::ensemble::SignedTernaryMatrix;

/// Determinant by fraction-free (Bareiss) elimination.
///
/// Runs in `i128` with checked arithmetic and restarts in `BigInt` on
/// overflow. Every division in the recurrence is exact.
pub fn det_bareiss(m: &SignedTernaryMatrix) -> BigInt {
    let mut small: Vec<i128> = m.entries().iter().map(|&v| v as i128).collect();
    match bareiss_i128(&mut small, m.n()) {
        Some(d) => BigInt::from(d),
        None => {
            let mut big: Vec<BigInt> = m.entries().iter().map(|&v| BigInt::from(v)).collect();
            bareiss_big(&mut big, m.n())
        }
    }
}

fn bareiss_i128(a: &mut [i128], n: usize) -> Option<i128> {
    let mut negate = false;
    let mut prev: i128 = 1;
    for k in 0..n.saturating_sub(1) {
        if a[k * n + k] == 0 {
            let Some(r) = (k + 1..n).find(|&r| a[r * n + k] != 0) else {
                return Some(0);
            };
            for j in 0..n {
                a.swap(k * n + j, r * n + j);
            }
            negate = !negate;
        }
        let pivot = a[k * n + k];
        for i in k + 1..n {
            let lead = a[i * n + k];
            for j in k + 1..n {
                let t = a[i * n + j]
                    .checked_mul(pivot)?
                    .checked_sub(lead.checked_mul(a[k * n + j])?)?;
                debug_assert_eq!(t % prev, 0);
                a[i * n + j] = t / prev;
            }
        }
        prev = pivot;
    }
    let d = a[n * n - 1];
    Some(if negate { -d } else { d })
}

fn bareiss_big(a: &mut [BigInt], n: usize) -> BigInt {
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n.saturating_sub(1) {
        if a[k * n + k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                return BigInt::zero();
            };
            for j in 0..n {
                a.swap(k * n + j, r * n + j);
            }
            negate = !negate;
        }
        let pivot = a[k * n + k].clone();
        for i in k + 1..n {
            let lead = a[i * n + k].clone();
            for j in k + 1..n {
                let t = &a[i * n + j] * &pivot - &lead * &a[k * n + j];
                let (q, r) = t.div_rem(&prev);
                debug_assert!(r.is_zero());
                a[i * n + j] = q;
            }
        }
        prev = pivot;
    }
    let d = a[n * n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert_eq!(det_bareiss(&SignedTernaryMatrix::identity(3)), BigInt::from(1));
        let m = SignedTernaryMatrix::from_rows(&[[1, 1], [1, -1]]).unwrap();
        assert_eq!(det_bareiss(&m), BigInt::from(-2));
        assert_eq!(det_bareiss(&SignedTernaryMatrix::zeros(5)), BigInt::from(0));
        let one = SignedTernaryMatrix::from_rows(&[[-1]]).unwrap();
        assert_eq!(det_bareiss(&one), BigInt::from(-1));
    }

    #[test]
    fn pivoting_needed() {
        // zero leading entry forces a row swap
        let m = SignedTernaryMatrix::from_rows(&[[0, 1, 0], [1, 0, 0], [0, 0, 1]]).unwrap();
        assert_eq!(det_bareiss(&m), BigInt::from(-1));
    }

    #[test]
    fn big_path_agrees_with_small_path() {
        let mut s = crate::ensemble::XiSampler::new(3, 0);
        for n in 1..=14 {
            let m = s.sample_matrix(n).unwrap();
            let mut big: Vec<BigInt> = m.entries().iter().map(|&v| BigInt::from(v)).collect();
            assert_eq!(bareiss_big(&mut big, n), det_bareiss(&m), "n = {n}");
        }
    }
}
