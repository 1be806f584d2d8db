use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::modular::Montgomery32;
use crate::arith::{is_prime_u64, isqrt_biguint, pow_mod};
use crate::ensemble::SignedTernaryMatrix;

const CACHED_PRIMES: usize = 64;

/// The largest `count` primes below 2^31, in descending order.
pub fn crt_primes(count: usize) -> Vec<u64> {
    static CACHE: OnceLock<Vec<u64>> = OnceLock::new();
    let cached = CACHE.get_or_init(|| generate_primes(CACHED_PRIMES));
    if count <= cached.len() {
        cached[..count].to_vec()
    } else {
        generate_primes(count)
    }
}

fn generate_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut c = (1u64 << 31) - 1;
    while out.len() < count {
        if is_prime_u64(c) {
            out.push(c);
        }
        c -= 2;
    }
    out
}

/// `min(n!, ⌈n^(n/2)⌉)`, a bound on `|det M|` for entries in `{-1, 0, 1}`.
pub fn det_bound(n: usize) -> BigUint {
    let factorial = (1..=n as u64).fold(BigUint::one(), |acc, k| acc * k);
    let nn = BigUint::from(n as u64).pow(n as u32);
    let root = isqrt_biguint(&nn);
    let hadamard = if &root * &root == nn { root } else { root + 1u32 };
    factorial.min(hadamard)
}

fn log2_bound(n: usize) -> f64 {
    let fact: f64 = (2..=n).map(|k| (k as f64).log2()).sum();
    let hadamard = n as f64 / 2.0 * (n as f64).log2();
    fact.min(hadamard)
}

/// Number of CRT primes whose product exceeds `2 * det_bound(n)`.
pub(crate) fn primes_needed(n: usize) -> usize {
    // every prime exceeds 2^30; one spare bit absorbs rounding in the log
    ((log2_bound(n) + 2.0) / 30.0).floor() as usize + 1
}

/// Determinant reconstructed from residues modulo large primes.
pub fn det_crt(m: &SignedTernaryMatrix) -> BigInt {
    let primes = crt_primes(primes_needed(m.n()));
    let residues: Vec<u64> = primes
        .iter()
        .map(|&p| u64::from(Montgomery32::new(p as u32).det(m)))
        .collect();
    reconstruct_symmetric(&residues, &primes)
}

// Garner's mixed-radix reconstruction, then lift into (-M/2, M/2].
pub(crate) fn reconstruct_symmetric(residues: &[u64], primes: &[u64]) -> BigInt {
    let mut digits: Vec<u64> = Vec::with_capacity(primes.len());
    for (i, (&r, &p)) in residues.iter().zip(primes).enumerate() {
        // value of the digits so far, mod p
        let mut partial = 0u64;
        for j in (0..i).rev() {
            partial = mul_mod(partial, primes[j] % p, p);
            partial = (partial + digits[j] % p) % p;
        }
        let mut prefix = 1u64;
        for &q in &primes[..i] {
            prefix = mul_mod(prefix, q % p, p);
        }
        let inv = pow_mod(prefix, p - 2, p);
        let diff = (r + p - partial) % p;
        digits.push(mul_mod(diff, inv, p));
    }
    let mut value = BigUint::zero();
    let mut modulus = BigUint::one();
    for (&d, &p) in digits.iter().zip(primes).rev() {
        value = value * p + d;
    }
    for &p in primes {
        modulus *= p;
    }
    let half = &modulus >> 1;
    if value > half {
        BigInt::from(value) - BigInt::from(modulus)
    } else {
        BigInt::from(value)
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::XiSampler;
    use crate::exactdet::det_bareiss;

    #[test]
    fn primes_are_large_and_distinct() {
        let ps = crt_primes(70);
        assert!(ps.windows(2).all(|w| w[0] > w[1]));
        assert!(ps.iter().all(|&p| p > 1 << 30 && p < 1 << 31 && is_prime_u64(p)));
        assert_eq!(&crt_primes(3)[..], &ps[..3]);
    }

    #[test]
    fn bound_values() {
        assert_eq!(det_bound(1), BigUint::from(1u8));
        assert_eq!(det_bound(2), BigUint::from(2u8));
        assert_eq!(det_bound(3), BigUint::from(6u8)); // 3^1.5 ≈ 5.2 -> 6 = 3!
        assert_eq!(det_bound(4), BigUint::from(16u8));
        assert_eq!(det_bound(5), BigUint::from(56u8)); // ⌈5^2.5⌉
    }

    #[test]
    fn enough_primes() {
        for n in 1..200 {
            let ps = crt_primes(primes_needed(n));
            let product = ps.iter().fold(BigUint::one(), |acc, &p| acc * p);
            assert!(product > det_bound(n) * 2u32, "n = {n}");
        }
    }

    #[test]
    fn reconstruct_signs() {
        let primes = crt_primes(2);
        for v in [-5i64, 0, 7, -1, 1 << 59, -(1 << 59) + 3] {
            let res: Vec<u64> = primes
                .iter()
                .map(|&p| v.rem_euclid(p as i64) as u64)
                .collect();
            assert_eq!(reconstruct_symmetric(&res, &primes), BigInt::from(v));
        }
    }

    #[test]
    fn zero_and_random() {
        assert_eq!(det_crt(&SignedTernaryMatrix::zeros(9)), BigInt::zero());
        let mut s = XiSampler::new(8, 0);
        for n in [1, 2, 5, 17, 30, 45] {
            let m = s.sample_matrix(n).unwrap();
            assert_eq!(det_crt(&m), det_bareiss(&m), "n = {n}");
        }
    }
}
