//! The entry law of the random matrices and the objects drawn from it.
//!
//! Every entry is an independent `ξ` with `P(0) = 1/2`, `P(1) = P(-1) = 1/4`.
//! A draw consumes exactly two uniform bits `b1 b0` from the generator:
//!
//! | `b1 b0` | value |
//! |---------|-------|
//! | `00`    | `0`   |
//! | `01`    | `0`   |
//! | `10`    | `+1`  |
//! | `11`    | `-1`  |
//!
//! so the weights are exact by construction. Bits are taken from each 64-bit
//! word of the stream starting at the least significant pair.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// One entry of the ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Xi {
    Zero,
    Plus,
    Minus,
}

impl Xi {
    /// Base-3 digit order used by [`enumerate_weighted`].
    pub const DIGITS: [Xi; 3] = [Xi::Zero, Xi::Plus, Xi::Minus];

    pub fn from_bits(b1: bool, b0: bool) -> Xi {
        match (b1, b0) {
            (false, _) => Xi::Zero,
            (true, false) => Xi::Plus,
            (true, true) => Xi::Minus,
        }
    }

    pub fn value(self) -> i8 {
        match self {
            Xi::Zero => 0,
            Xi::Plus => 1,
            Xi::Minus => -1,
        }
    }

    pub fn try_from_int(v: i64) -> Result<Xi> {
        match v {
            0 => Ok(Xi::Zero),
            1 => Ok(Xi::Plus),
            -1 => Ok(Xi::Minus),
            other => Err(Error::EntryOutOfRange(other)),
        }
    }

    /// Weight numerator over a denominator of 4: `2` for zero, `1` otherwise.
    pub fn weight_quarters(self) -> u32 {
        if self == Xi::Zero {
            2
        } else {
            1
        }
    }
}

/// Parameters of the ensemble. The entry weights are fixed at `(1/2, 1/4, 1/4)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnsembleSpec {
    pub n: usize,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn new(n: usize, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("matrix dimension must be at least 1".into()));
        }
        Ok(EnsembleSpec { n, seed })
    }

    /// Exact weights `(P(0), P(1), P(-1))`.
    pub fn weights() -> [BigRational; 3] {
        let r = |num: i64, den: i64| BigRational::new(BigInt::from(num), BigInt::from(den));
        [r(1, 2), r(1, 4), r(1, 4)]
    }
}

/// Draws `ξ` values two bits at a time from a ChaCha8 substream.
///
/// Substreams are addressed by `(seed, stream)`; experiments use the global
/// sample index as the stream so that results do not depend on how samples
/// are split across shards.
#[derive(Debug, Clone)]
pub struct XiSampler {
    rng: ChaCha8Rng,
    buffer: u64,
    remaining: u32,
}

impl XiSampler {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        XiSampler {
            rng,
            buffer: 0,
            remaining: 0,
        }
    }

    /// Next two uniform bits as `(b1, b0)`.
    pub fn next_bits(&mut self) -> (bool, bool) {
        if self.remaining == 0 {
            self.buffer = self.rng.next_u64();
            self.remaining = 32;
        }
        let b0 = self.buffer & 1 == 1;
        let b1 = self.buffer & 2 == 2;
        self.buffer >>= 2;
        self.remaining -= 1;
        (b1, b0)
    }

    pub fn sample_xi(&mut self) -> Xi {
        let (b1, b0) = self.next_bits();
        Xi::from_bits(b1, b0)
    }

    /// Raw 64-bit draw for callers that need uniform integers (family generators).
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// `n x n` matrix filled in row-major order.
    pub fn sample_matrix(&mut self, n: usize) -> Result<SignedTernaryMatrix> {
        if n == 0 {
            return Err(Error::InvalidArgument("matrix dimension must be at least 1".into()));
        }
        let entries = (0..n * n).map(|_| self.sample_xi().value()).collect();
        Ok(SignedTernaryMatrix { n, entries })
    }

    pub fn sample_vector(&mut self, len: usize) -> Vec<Xi> {
        (0..len).map(|_| self.sample_xi()).collect()
    }
}

/// Samples the matrix for `spec` from stream 0 of its seed.
pub fn sample_matrix(spec: &EnsembleSpec) -> Result<SignedTernaryMatrix> {
    XiSampler::new(spec.seed, 0).sample_matrix(spec.n)
}

/// Square matrix with entries in `{-1, 0, 1}`, stored row-major and indexed from 0.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignedTernaryMatrix {
    n: usize,
    entries: Vec<i8>,
}

impl SignedTernaryMatrix {
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidArgument("matrix dimension must be at least 1".into()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::InvalidArgument(format!(
                    "row {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    n
                )));
            }
            for &v in row {
                entries.push(Xi::try_from_int(v)?.value());
            }
        }
        Ok(SignedTernaryMatrix { n, entries })
    }

    pub fn from_xi(n: usize, xs: &[Xi]) -> Result<Self> {
        if n == 0 || xs.len() != n * n {
            return Err(Error::InvalidArgument(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                xs.len()
            )));
        }
        Ok(SignedTernaryMatrix {
            n,
            entries: xs.iter().map(|x| x.value()).collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "matrix dimension must be at least 1");
        SignedTernaryMatrix {
            n,
            entries: vec![0; n * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> i8 {
        self.entries[row * self.n + col]
    }

    pub fn set(&mut self, row: usize, col: usize, xi: Xi) {
        self.entries[row * self.n + col] = xi.value();
    }

    pub fn row(&self, row: usize) -> &[i8] {
        &self.entries[row * self.n..(row + 1) * self.n]
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    /// The matrix with the given (sorted, distinct) rows and columns deleted.
    ///
    /// Panics if nothing would remain.
    pub fn delete(&self, rows: &[usize], cols: &[usize]) -> SignedTernaryMatrix {
        assert_eq!(rows.len(), cols.len(), "minor must stay square");
        let m = self.n - rows.len();
        assert!(m > 0, "minor would be empty");
        let mut entries = Vec::with_capacity(m * m);
        for i in (0..self.n).filter(|i| !rows.contains(i)) {
            for j in (0..self.n).filter(|j| !cols.contains(j)) {
                entries.push(self.get(i, j));
            }
        }
        SignedTernaryMatrix { n: m, entries }
    }
}

impl fmt::Debug for SignedTernaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SignedTernaryMatrix({})", self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(|v| format!("{v:>2}")).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Default cap on the length of enumerated patterns.
pub const ENUMERATION_CAP: usize = 12;

/// A pattern in `{0,±1}^k` with its exact probability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedVector {
    pub pattern: Vec<Xi>,
    /// Probability numerator over `4^k`, equal to `2^(number of zeros)`.
    pub weight_num: u64,
}

impl WeightedVector {
    pub fn weight(&self) -> BigRational {
        pattern_weight(&self.pattern)
    }
}

/// Exact probability that `ξ` equals `pattern`.
pub fn pattern_weight(pattern: &[Xi]) -> BigRational {
    let zeros = pattern.iter().filter(|x| **x == Xi::Zero).count();
    BigRational::new(
        BigInt::from(1u8) << zeros,
        BigInt::from(1u8) << (2 * pattern.len()),
    )
}

/// Iterator over `{0,±1}^k` in base-3 counter order with digit order `(0, 1, -1)`;
/// the first coordinate is the least significant digit.
#[derive(Debug, Clone)]
pub struct WeightedEnumeration {
    digits: Vec<u8>,
    done: bool,
}

impl Iterator for WeightedEnumeration {
    type Item = WeightedVector;

    fn next(&mut self) -> Option<WeightedVector> {
        if self.done {
            return None;
        }
        let pattern: Vec<Xi> = self.digits.iter().map(|&d| Xi::DIGITS[d as usize]).collect();
        let zeros = self.digits.iter().filter(|&&d| d == 0).count();
        let item = WeightedVector {
            pattern,
            weight_num: 1u64 << zeros,
        };
        // increment the counter
        let mut carry = true;
        for d in self.digits.iter_mut() {
            if *d == 2 {
                *d = 0;
            } else {
                *d += 1;
                carry = false;
                break;
            }
        }
        if carry {
            self.done = true;
        }
        Some(item)
    }
}

/// All `3^k` weighted patterns, `k <= ENUMERATION_CAP`.
pub fn enumerate_weighted(k: usize) -> Result<WeightedEnumeration> {
    enumerate_weighted_with_cap(k, ENUMERATION_CAP)
}

pub fn enumerate_weighted_with_cap(k: usize, cap: usize) -> Result<WeightedEnumeration> {
    if k > cap {
        return Err(Error::EnumerationCap { requested: k, cap });
    }
    Ok(WeightedEnumeration {
        digits: vec![0; k],
        done: false,
    })
}
