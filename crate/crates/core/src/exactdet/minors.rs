//! First-row minors `d_i`, second-order minors `w_j`, and the rank deficiency
//! of trailing columns over 𝔽_p.
//!
//! Indices in the public vectors are 0-based: `d[i]` is the paper-style
//! `d_{i+1}` and `w[j]` stands for `w_{j+2}`.
//!
//! Relations (1-based, `m_{r,c}` the entries of `M`):
//!
//! ```text
//! det M = Σ_{i=1..n} (-1)^(i+1) m_{1,i} d_i
//! d_1   = Σ_{j=2..n} (-1)^j m_{j,2} w_j
//! d_2   = Σ_{j=2..n} (-1)^j m_{j,1} w_j
//! ```
//!
//! The last two come from expanding `d_1` along column 2 of `M` and `d_2`
//! along column 1; row `j` of `M` is row `j - 1` of the minor, which gives the
//! sign `(-1)^((j-1)+1) = (-1)^j`. In general `d_i = Σ_j (-1)^j m_{j,3-i} w_j`.

use num_bigint::BigInt;
use num_traits::Zero;

use super::{det, rank_mod_p};
use crate::arith::is_prime_u64;
use crate::ensemble::SignedTernaryMatrix;
use crate::error::{Error, Result};

/// `d_i = det(M without row 1 and column i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorVector {
    pub d: Vec<BigInt>,
}

impl MinorVector {
    /// `Σ (-1)^i r_i d_i` over 0-based `i` for a candidate first row `r`.
    pub fn expand(&self, first_row: &[i8]) -> BigInt {
        assert_eq!(first_row.len(), self.d.len());
        let mut acc = BigInt::zero();
        for (i, (&r, d)) in first_row.iter().zip(&self.d).enumerate() {
            let signed = if i % 2 == 0 { r } else { -r };
            match signed {
                1 => acc += d,
                -1 => acc -= d,
                _ => {}
            }
        }
        acc
    }
}

/// `w_j = det(M without rows {1, j} and columns {1, 2})` for `j = 2..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecondMinorVector {
    pub w: Vec<BigInt>,
}

impl SecondMinorVector {
    /// Signed coefficients `(-1)^j w_j`, `j = 2..n`.
    pub fn signed(&self) -> Vec<BigInt> {
        self.w
            .iter()
            .enumerate()
            .map(|(idx, w)| if idx % 2 == 0 { w.clone() } else { -w })
            .collect()
    }

    /// `d_which` (`which ∈ {1, 2}`) rebuilt as `Σ_j (-1)^j m_{j,3-which} w_j`.
    pub fn reconstruct_d(&self, m: &SignedTernaryMatrix, which: usize) -> BigInt {
        assert!(which == 1 || which == 2, "only d_1 and d_2 have this expansion");
        let col = 2 - which; // 0-based column 3 - which
        self.signed()
            .iter()
            .enumerate()
            .fold(BigInt::zero(), |acc, (idx, sw)| {
                acc + sw * BigInt::from(m.get(idx + 1, col))
            })
    }
}

/// All `n` first-row minors. Requires `n >= 2`.
pub fn first_row_minors(m: &SignedTernaryMatrix) -> Result<MinorVector> {
    let n = m.n();
    if n < 2 {
        return Err(Error::InvalidArgument(format!("first-row minors need n >= 2, got {n}")));
    }
    let d = (0..n).map(|i| det(&m.delete(&[0], &[i]))).collect();
    Ok(MinorVector { d })
}

/// Only the minors `d_i` for the given 0-based columns.
pub fn first_row_minors_at(m: &SignedTernaryMatrix, cols: &[usize]) -> Result<Vec<BigInt>> {
    let n = m.n();
    if n < 2 {
        return Err(Error::InvalidArgument(format!("first-row minors need n >= 2, got {n}")));
    }
    Ok(cols.iter().map(|&i| det(&m.delete(&[0], &[i]))).collect())
}

/// `w_2, ..., w_n`. Requires `n >= 3`.
pub fn second_order_minors(m: &SignedTernaryMatrix) -> Result<SecondMinorVector> {
    let n = m.n();
    if n < 3 {
        return Err(Error::InvalidArgument(format!("second-order minors need n >= 3, got {n}")));
    }
    let w = (1..n).map(|j| det(&m.delete(&[0, j], &[0, 1]))).collect();
    Ok(SecondMinorVector { w })
}

/// Rank over 𝔽_p of a family of vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FpRankReport {
    pub p: u64,
    pub num_vectors: usize,
    pub ambient_dim: usize,
    pub rank: usize,
    /// `num_vectors - rank`.
    pub deficiency: usize,
}

/// Columns `k+1..n` (1-based) of `M` restricted to rows `2..n`, ranked over 𝔽_p.
pub fn trailing_column_deficiency(m: &SignedTernaryMatrix, p: u64, k: usize) -> Result<FpRankReport> {
    let n = m.n();
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if n < k + 1 {
        return Err(Error::InvalidArgument(format!(
            "trailing columns need n >= k + 1, got n = {n}, k = {k}"
        )));
    }
    let rows = n - 1;
    let cols = n - k;
    let mut entries = Vec::with_capacity(rows * cols);
    for i in 1..n {
        for j in k..n {
            entries.push(i64::from(m.get(i, j)));
        }
    }
    let rank = rank_mod_p(&entries, rows, cols, p)?;
    Ok(FpRankReport {
        p,
        num_vectors: cols,
        ambient_dim: rows,
        rank,
        deficiency: cols - rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{Xi, XiSampler};
    use crate::exactdet::{det_bareiss, det_mod_p};

    #[test]
    fn identity_minors() {
        let d = first_row_minors(&SignedTernaryMatrix::identity(3)).unwrap().d;
        assert_eq!(d, vec![BigInt::from(1), BigInt::from(0), BigInt::from(0)]);
        assert!(first_row_minors(&SignedTernaryMatrix::identity(1)).is_err());
    }

    #[test]
    fn two_by_two_minors() {
        let m = SignedTernaryMatrix::from_rows(&[[1, 0], [-1, 1]]).unwrap();
        let d = first_row_minors(&m).unwrap().d;
        // [[a,b],[c,d]] -> d_1 = d, d_2 = c
        assert_eq!(d, vec![BigInt::from(1), BigInt::from(-1)]);
    }

    #[test]
    fn cofactor_identity() {
        let mut s = XiSampler::new(4, 0);
        for n in 2..=12 {
            for _ in 0..10 {
                let m = s.sample_matrix(n).unwrap();
                let mv = first_row_minors(&m).unwrap();
                assert_eq!(mv.expand(m.row(0)), det_bareiss(&m));
            }
        }
    }

    #[test]
    fn second_order_identity() {
        let mut s = XiSampler::new(6, 0);
        for n in 3..=10 {
            for _ in 0..10 {
                let m = s.sample_matrix(n).unwrap();
                let d = first_row_minors(&m).unwrap().d;
                let w = second_order_minors(&m).unwrap();
                assert_eq!(w.reconstruct_d(&m, 1), d[0]);
                assert_eq!(w.reconstruct_d(&m, 2), d[1]);
            }
        }
    }

    #[test]
    fn three_by_three_w_are_entries() {
        let m = SignedTernaryMatrix::from_rows(&[[1, 0, -1], [0, 1, 1], [-1, -1, 0]]).unwrap();
        let w = second_order_minors(&m).unwrap().w;
        assert_eq!(w, vec![BigInt::from(m.get(2, 2)), BigInt::from(m.get(1, 2))]);
        assert!(second_order_minors(&SignedTernaryMatrix::identity(2)).is_err());
    }

    #[test]
    fn identity_four_w() {
        // w_j deletes rows {1, j} and columns {1, 2}; only j = 2 leaves the identity
        let w = second_order_minors(&SignedTernaryMatrix::identity(4)).unwrap().w;
        let oracle: Vec<BigInt> = (1..4)
            .map(|j| det_bareiss(&SignedTernaryMatrix::identity(4).delete(&[0, j], &[0, 1])))
            .collect();
        assert_eq!(w, oracle);
        assert_eq!(w, vec![BigInt::from(1), BigInt::from(0), BigInt::from(0)]);
    }

    #[test]
    fn deficiency_examples() {
        let r = trailing_column_deficiency(&SignedTernaryMatrix::identity(6), 3, 3).unwrap();
        assert_eq!((r.num_vectors, r.ambient_dim, r.rank, r.deficiency), (3, 5, 3, 0));

        let mut m = SignedTernaryMatrix::identity(6);
        for i in 0..6 {
            m.set(i, 5, if m.get(i, 4) == 1 { Xi::Plus } else { Xi::Zero });
        }
        assert!(trailing_column_deficiency(&m, 5, 3).unwrap().deficiency >= 1);
        assert_eq!(
            trailing_column_deficiency(&m, 4, 3),
            Err(Error::NotPrime(4))
        );
        assert!(trailing_column_deficiency(&SignedTernaryMatrix::identity(3), 3, 3).is_err());
    }

    #[test]
    fn deficiency_two_forces_divisibility() {
        let mut s = XiSampler::new(10, 0);
        let mut seen = 0;
        for _ in 0..3000 {
            let m = s.sample_matrix(7).unwrap();
            let r = trailing_column_deficiency(&m, 2, 3).unwrap();
            if r.deficiency >= 2 {
                seen += 1;
                for col in [0, 1] {
                    assert_eq!(det_mod_p(&m.delete(&[0], &[col]), 2).unwrap(), 0);
                }
            }
        }
        assert!(seen > 0);
    }
}
