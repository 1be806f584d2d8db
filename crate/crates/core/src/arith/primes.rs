use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};

/// Every dyadic block `(2^l, 2^(l+1)]` with `4 <= l <= 19` satisfies
/// `Σ 1/p <= DYADIC_INCREMENT_CONSTANT / l`.
pub const DYADIC_INCREMENT_CONSTANT: u32 = 1;

/// Primes `<= n` in ascending order (sieve of Eratosthenes).
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i.saturating_mul(i);
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

/// Primes below 10^6, shared by trial division.
pub(crate) fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(1_000_000))
}

#[inline]
pub(crate) fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve prime bases are exact below 2^64.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// `Σ 1/p` over primes `p <= n`, exact, with a floating-point convenience value.
#[derive(Debug, Clone, PartialEq)]
pub struct MertensSum {
    pub n: u64,
    pub exact: BigRational,
    pub value: f64,
    pub prime_count: usize,
}

/// Exact `Σ_{p <= n} 1/p`. Requires `n >= 2`.
pub fn mertens_sum(n: u64) -> Result<MertensSum> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("mertens_sum needs n >= 2, got {n}")));
    }
    prime_reciprocal_sum(1, n)
}

/// Exact `Σ 1/p` over primes with `lo < p <= hi`.
pub fn prime_reciprocal_sum(lo: u64, hi: u64) -> Result<MertensSum> {
    if hi < lo {
        return Err(Error::InvalidArgument(format!("empty range ({lo}, {hi}]")));
    }
    let primes: Vec<u64> = primes_up_to(hi).into_iter().filter(|&p| p > lo).collect();
    let (num, den) = reciprocal_tree(&primes);
    // already in lowest terms, see reciprocal_tree
    let exact = BigRational::new_raw(BigInt::from(num), BigInt::from(den));
    let value = ratio_to_f64(&exact);
    Ok(MertensSum {
        n: hi,
        exact,
        value,
        prime_count: primes.len(),
    })
}

// Distinct primes give coprime denominators, so a/b + c/d = (ad + bc)/(bd)
// needs no reduction and the final fraction is already in lowest terms.
fn reciprocal_tree(primes: &[u64]) -> (BigUint, BigUint) {
    match primes.len() {
        0 => (BigUint::ZERO, BigUint::one()),
        1 => (BigUint::one(), BigUint::from(primes[0])),
        len => {
            let (a, b) = reciprocal_tree(&primes[..len / 2]);
            let (c, d) = reciprocal_tree(&primes[len / 2..]);
            (&a * &d + &c * &b, b * d)
        }
    }
}

/// Nearest-ish `f64` of a rational with huge numerator and denominator.
pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let num = r.numer();
    let den = r.denom();
    let shift = num.bits().max(den.bits()).saturating_sub(60);
    let n = (num >> shift).to_f64().unwrap_or(0.0);
    let d = (den >> shift).to_f64().unwrap_or(1.0);
    n / d
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn small_sieves() {
        assert_eq!(primes_up_to(10), vec![2, 3, 5, 7]);
        assert!(primes_up_to(1).is_empty());
        assert!(primes_up_to(0).is_empty());
        assert_eq!(primes_up_to(2), vec![2]);
    }

    #[test]
    fn prime_count_to_a_million() {
        let sieve = primes_up_to(1_000_000);
        assert_eq!(sieve.len(), 78498);
        // independent check by primality testing every integer
        let by_test = (0..=1_000_000u64).filter(|&n| is_prime_u64(n)).count();
        assert_eq!(by_test, 78498);
    }

    #[test]
    fn miller_rabin_known_values() {
        assert!(is_prime_u64(2));
        assert!(!is_prime_u64(1));
        assert!(is_prime_u64(1_000_000_007));
        assert!(is_prime_u64(18_446_744_073_709_551_557)); // largest 64-bit prime
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to 2, 3, 5, 7
        assert!(!is_prime_u64(341_550_071_728_321));
    }

    #[test]
    fn mertens_ten() {
        let s = mertens_sum(10).unwrap();
        assert_eq!(s.exact, BigRational::new(247.into(), 210.into()));
        assert!((s.value - 1.176190476).abs() < 1e-8);
        assert_eq!(mertens_sum(2).unwrap().exact, BigRational::new(1.into(), 2.into()));
        assert!(mertens_sum(1).is_err());
    }

    #[test]
    fn tree_matches_sequential_sum() {
        let seq: BigRational = primes_up_to(500)
            .into_iter()
            .map(|p| BigRational::new(1.into(), BigInt::from(p)))
            .sum();
        assert_eq!(mertens_sum(500).unwrap().exact, seq);
    }

    #[test]
    fn split_sums_add_up() {
        let whole = mertens_sum(1 << 10).unwrap().exact;
        let low = mertens_sum(1 << 9).unwrap().exact;
        let block = prime_reciprocal_sum(1 << 9, 1 << 10).unwrap().exact;
        assert_eq!(low + block, whole);
        assert!(prime_reciprocal_sum(5, 5).unwrap().exact.is_zero());
    }

    #[test]
    fn dyadic_blocks_respect_constant() {
        for l in 4..=19u32 {
            let block = prime_reciprocal_sum(1 << l, 1 << (l + 1)).unwrap().exact;
            let bound = BigRational::new(DYADIC_INCREMENT_CONSTANT.into(), BigInt::from(l));
            assert!(block <= bound, "l = {l}");
        }
    }
}
