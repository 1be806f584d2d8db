//! Exact determinants of ternary matrices.
//!
//! Three engines are kept independent so they can check each other:
//! fraction-free elimination over ℤ ([`det_bareiss`]), Gaussian elimination
//! over 𝔽_p ([`det_mod_p`]), and multi-modular reconstruction ([`det_crt`]).
//! [`det`] picks between the two exact engines by size, and [`classify_det`]
//! answers the square question without always reconstructing the integer.

mod bareiss;
mod crt;
mod minors;
mod modular;

pub use bareiss::det_bareiss;
pub use crt::{crt_primes, det_bound, det_crt};
pub use minors::{
    first_row_minors, first_row_minors_at, second_order_minors, trailing_column_deficiency, FpRankReport, MinorVector,
    SecondMinorVector,
};
pub use modular::{det_mod_p, rank_mod_p};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::is_perfect_square;
use crate::ensemble::SignedTernaryMatrix;
use modular::Montgomery32;

/// Dimension above which [`det`] switches from Bareiss to CRT (measured
/// with the `determinant` bench: Bareiss wins up to `n = 6`, CRT from `n = 8`).
pub const CRT_CROSSOVER: usize = 7;

/// Exact determinant using the faster engine for the dimension.
pub fn det(m: &SignedTernaryMatrix) -> BigInt {
    if m.n() > CRT_CROSSOVER {
        det_crt(m)
    } else {
        det_bareiss(m)
    }
}

/// Square status of a determinant; zero counts as a square (`0 = 0²`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DetClass {
    Zero,
    NonzeroSquare,
    NonSquare,
}

impl DetClass {
    pub fn is_square(self) -> bool {
        self != DetClass::NonSquare
    }

    pub fn of(d: &BigInt) -> DetClass {
        if d.is_zero() {
            DetClass::Zero
        } else if is_perfect_square(d) {
            DetClass::NonzeroSquare
        } else {
            DetClass::NonSquare
        }
    }
}

/// Classifies `det M` exactly.
///
/// Above [`CRT_CROSSOVER`] the residues are computed one prime at a time; a
/// nonzero quadratic non-residue modulo any prime proves `det M` is not a
/// square, so most non-squares stop after one or two primes. Only matrices
/// that pass every prime get the full reconstruction.
pub fn classify_det(m: &SignedTernaryMatrix) -> DetClass {
    if m.n() <= CRT_CROSSOVER {
        return DetClass::of(&det_bareiss(m));
    }
    let primes = crt_primes(crt::primes_needed(m.n()));
    let mut residues = Vec::with_capacity(primes.len());
    for &p in &primes {
        let mont = Montgomery32::new(p as u32);
        let r = mont.det(m);
        if mont.is_nonresidue(r) {
            return DetClass::NonSquare;
        }
        residues.push(u64::from(r));
    }
    DetClass::of(&crt::reconstruct_symmetric(&residues, &primes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::XiSampler;

    #[test]
    fn classify_matches_exact_determinant() {
        let mut s = XiSampler::new(11, 0);
        for n in [1, 2, 3, 8, 16, 17, 20, 33] {
            for _ in 0..200 {
                let m = s.sample_matrix(n).unwrap();
                assert_eq!(classify_det(&m), DetClass::of(&det_bareiss(&m)), "n = {n}");
            }
        }
    }

    #[test]
    fn classify_special_matrices() {
        assert_eq!(classify_det(&SignedTernaryMatrix::zeros(20)), DetClass::Zero);
        assert_eq!(classify_det(&SignedTernaryMatrix::identity(20)), DetClass::NonzeroSquare);
        let mut m = SignedTernaryMatrix::identity(20);
        m.set(0, 0, crate::ensemble::Xi::Minus);
        assert_eq!(classify_det(&m), DetClass::NonSquare);
        assert!(DetClass::Zero.is_square());
    }
}
