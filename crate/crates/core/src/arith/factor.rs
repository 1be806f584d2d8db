use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::primes::{is_prime_u64, mul_mod_u64, primes_up_to, small_primes};
use crate::error::{Error, Result};

/// Work limits for [`factorize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorBudget {
    /// Trial division runs over primes up to this bound.
    pub trial_limit: u64,
    /// Total number of rho iterations allowed across all splits.
    pub rho_steps: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_limit: 1_000_000,
            rho_steps: 1 << 24,
        }
    }
}

/// `sign * Π p^e`, or the distinguished factorization of zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub sign: i8,
    /// Strictly increasing primes with exponents `>= 1`.
    pub factors: Vec<(BigUint, u32)>,
    pub zero: bool,
}

impl Factorization {
    pub fn zero() -> Self {
        Factorization {
            sign: 0,
            factors: Vec::new(),
            zero: true,
        }
    }

    pub fn recompose(&self) -> BigInt {
        if self.zero {
            return BigInt::zero();
        }
        let mag = self
            .factors
            .iter()
            .fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e));
        let sign = if self.sign < 0 { Sign::Minus } else { Sign::Plus };
        BigInt::from_biguint(sign, mag)
    }

    pub fn distinct_primes(&self) -> usize {
        self.factors.len()
    }

    /// Exponent of `p`, zero when absent.
    pub fn exponent(&self, p: &BigUint) -> u32 {
        self.factors
            .iter()
            .find(|(q, _)| q == p)
            .map_or(0, |(_, e)| *e)
    }

    /// The factorization of `2m`.
    pub fn doubled(&self) -> Factorization {
        if self.zero {
            return self.clone();
        }
        let two = BigUint::from(2u8);
        let mut map: BTreeMap<BigUint, u32> = self.factors.iter().cloned().collect();
        *map.entry(two).or_insert(0) += 1;
        Factorization {
            sign: self.sign,
            factors: map.into_iter().collect(),
            zero: false,
        }
    }

    /// All positive divisors of `|m|`, unsorted. Panics on zero.
    pub fn divisors(&self) -> Vec<BigUint> {
        assert!(!self.zero, "zero has no finite divisor set");
        let mut divs = vec![BigUint::one()];
        for (p, e) in &self.factors {
            let mut next = Vec::with_capacity(divs.len() * (*e as usize + 1));
            for d in &divs {
                let mut pk = d.clone();
                next.push(pk.clone());
                for _ in 0..*e {
                    pk *= p;
                    next.push(pk.clone());
                }
            }
            divs = next;
        }
        divs
    }

    /// `log τ(|m|)` computed as `Σ log(e + 1)`.
    pub fn log_divisor_count(&self) -> Result<f64> {
        if self.zero {
            return Err(Error::ZeroDivisorCount);
        }
        Ok(self.factors.iter().map(|(_, e)| ((e + 1) as f64).ln()).sum())
    }
}

/// `τ(|m|) = Π (e + 1)`; undefined for zero.
pub fn divisor_count(f: &Factorization) -> Result<u64> {
    if f.zero {
        return Err(Error::ZeroDivisorCount);
    }
    Ok(f.factors.iter().map(|(_, e)| u64::from(*e) + 1).product())
}

/// `ν_p(m) + 1`: the `k` with `p^(k-1) | m` and `p^k ∤ m`.
pub fn p_adic_k(m: &BigInt, p: u64) -> Result<u32> {
    if m.is_zero() {
        return Err(Error::InvalidArgument("p-adic valuation of zero".into()));
    }
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    let mut mag = m.magnitude().clone();
    let mut k = 1;
    loop {
        let (q, r) = mag.div_rem(&BigUint::from(p));
        if !r.is_zero() {
            return Ok(k);
        }
        mag = q;
        k += 1;
    }
}

/// Complete factorization by trial division followed by Brent's rho.
///
/// Every reported prime is certified: either it survived trial division up to
/// its square root, or it passed a Miller-Rabin base set that is exact in its
/// range. A cofactor that cannot be split or certified within the budget is
/// reported as an error carrying the partial factorization.
pub fn factorize(m: &BigInt, budget: FactorBudget) -> Result<Factorization> {
    if m.is_zero() {
        return Ok(Factorization::zero());
    }
    let sign = if m.sign() == Sign::Minus { -1 } else { 1 };
    let mut found: BTreeMap<BigUint, u32> = BTreeMap::new();
    let mut rest = m.magnitude().clone();

    let owned;
    let primes: &[u64] = if budget.trial_limit == 1_000_000 {
        small_primes()
    } else {
        owned = primes_up_to(budget.trial_limit);
        &owned
    };

    let mut trial_complete = true;
    if let Some(mut r) = rest.to_u64() {
        for &p in primes {
            if p.saturating_mul(p) > r {
                break;
            }
            let mut e = 0;
            while r % p == 0 {
                r /= p;
                e += 1;
            }
            if e > 0 {
                found.insert(BigUint::from(p), e);
            }
        }
        rest = BigUint::from(r);
    } else {
        for &p in primes {
            if BigUint::from(p) * p > rest {
                break;
            }
            let mut e = 0;
            loop {
                let (q, rem) = rest.div_rem(&BigUint::from(p));
                if !rem.is_zero() {
                    break;
                }
                rest = q;
                e += 1;
            }
            if e > 0 {
                found.insert(BigUint::from(p), e);
            }
        }
    }
    let last = primes.last().copied().unwrap_or(1);
    if rest > BigUint::one() {
        // A cofactor with no prime factor <= last is prime if it is below last².
        if rest < BigUint::from(last) * last {
            *found.entry(rest.clone()).or_insert(0) += 1;
            rest = BigUint::one();
        } else {
            trial_complete = false;
        }
    }

    if !trial_complete {
        let mut steps = budget.rho_steps;
        let mut stack = vec![rest];
        while let Some(c) = stack.pop() {
            if c.is_one() {
                continue;
            }
            match certify(&c) {
                Primality::Prime => {
                    *found.entry(c).or_insert(0) += 1;
                }
                Primality::Composite => match split(&c, &mut steps) {
                    Some(d) => {
                        let other = &c / &d;
                        stack.push(d);
                        stack.push(other);
                    }
                    None => return Err(budget_error(found, c, stack)),
                },
                Primality::Unknown => return Err(budget_error(found, c, stack)),
            }
        }
    }

    Ok(Factorization {
        sign,
        factors: found.into_iter().collect(),
        zero: false,
    })
}

fn budget_error(found: BTreeMap<BigUint, u32>, c: BigUint, stack: Vec<BigUint>) -> Error {
    let cofactor = stack.into_iter().fold(c, |acc, x| acc * x);
    Error::FactorizationBudget {
        partial: found.into_iter().collect(),
        cofactor: cofactor.to_string(),
    }
}

enum Primality {
    Prime,
    Composite,
    Unknown,
}

// Miller-Rabin with the first 13 primes is exact below 3.317e24.
fn certify(n: &BigUint) -> Primality {
    if let Some(small) = n.to_u64() {
        return if is_prime_u64(small) {
            Primality::Prime
        } else {
            Primality::Composite
        };
    }
    const BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
    let exact_below: BigUint = "3317044064679887385961981".parse().unwrap();
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &a in &BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return Primality::Composite;
    }
    if *n < exact_below {
        Primality::Prime
    } else {
        Primality::Unknown
    }
}

// Nontrivial divisor of a composite, or None if the step budget runs out.
fn split(n: &BigUint, steps: &mut u64) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u8));
    }
    if let Some(small) = n.to_u64() {
        for c in 1u64.. {
            match brent_u64(small, c, steps) {
                RhoOutcome::Found(d) => return Some(BigUint::from(d)),
                RhoOutcome::Failed => continue,
                RhoOutcome::OutOfSteps => return None,
            }
        }
        unreachable!()
    }
    for c in 1u64.. {
        match brent_big(n, c, steps) {
            RhoOutcome::Found(d) => return Some(d),
            RhoOutcome::Failed => continue,
            RhoOutcome::OutOfSteps => return None,
        }
    }
    unreachable!()
}

enum RhoOutcome<T> {
    Found(T),
    Failed,
    OutOfSteps,
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

// Brent's cycle detection on x -> x² + c with batched gcds.
fn brent_u64(n: u64, c: u64, steps: &mut u64) -> RhoOutcome<u64> {
    let f = |x: u64| ((x as u128 * x as u128 + c as u128) % n as u128) as u64;
    let batch = 128;
    let mut y = 2 % n;
    let mut r = 1u64;
    let mut q = 1u64;
    let mut g = 1u64;
    let mut x = y;
    let mut ys = y;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            let m = batch.min(r - k);
            for _ in 0..m {
                y = f(y);
                q = mul_mod_u64(q, x.abs_diff(y), n);
            }
            if *steps < m {
                return RhoOutcome::OutOfSteps;
            }
            *steps -= m;
            g = gcd_u64(q, n);
            k += m;
        }
        r *= 2;
    }
    if g == n {
        loop {
            ys = f(ys);
            g = gcd_u64(x.abs_diff(ys), n);
            if g > 1 {
                break;
            }
        }
    }
    if g == n {
        RhoOutcome::Failed
    } else {
        RhoOutcome::Found(g)
    }
}

fn brent_big(n: &BigUint, c: u64, steps: &mut u64) -> RhoOutcome<BigUint> {
    let c = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &c) % n;
    let diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    let batch = 128u64;
    let mut y = BigUint::from(2u8) % n;
    let mut r = 1u64;
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            let m = batch.min(r - k);
            for _ in 0..m {
                y = f(&y);
                q = (&q * diff(&x, &y)) % n;
            }
            if *steps < m {
                return RhoOutcome::OutOfSteps;
            }
            *steps -= m;
            g = q.gcd(n);
            k += m;
        }
        r *= 2;
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    if &g == n {
        RhoOutcome::Failed
    } else {
        RhoOutcome::Found(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fz(m: i64) -> Factorization {
        factorize(&BigInt::from(m), FactorBudget::default()).unwrap()
    }

    fn pairs(f: &Factorization) -> Vec<(u64, u32)> {
        f.factors
            .iter()
            .map(|(p, e)| (p.to_u64().unwrap(), *e))
            .collect()
    }

    #[test]
    fn small_factorizations() {
        let f = fz(12);
        assert_eq!(f.sign, 1);
        assert_eq!(pairs(&f), vec![(2, 2), (3, 1)]);
        let f = fz(-45);
        assert_eq!(f.sign, -1);
        assert_eq!(pairs(&f), vec![(3, 2), (5, 1)]);
        assert!(fz(1).factors.is_empty());
        assert!(fz(0).zero);
    }

    #[test]
    fn divisor_counts() {
        assert_eq!(divisor_count(&fz(12)).unwrap(), 6);
        assert_eq!(divisor_count(&fz(1)).unwrap(), 1);
        assert_eq!(divisor_count(&fz(-2)).unwrap(), 2);
        assert_eq!(divisor_count(&fz(0)), Err(Error::ZeroDivisorCount));
    }

    #[test]
    fn divisor_count_matches_enumeration() {
        for m in 1..=100_000u64 {
            let mut brute = 0;
            let mut d = 1;
            while d * d <= m {
                if m % d == 0 {
                    brute += if d * d == m { 1 } else { 2 };
                }
                d += 1;
            }
            assert_eq!(divisor_count(&fz(m as i64)).unwrap(), brute, "m = {m}");
        }
    }

    #[test]
    fn p_adic() {
        assert_eq!(p_adic_k(&BigInt::from(12), 2).unwrap(), 3);
        assert_eq!(p_adic_k(&BigInt::from(7), 3).unwrap(), 1);
        assert!(p_adic_k(&BigInt::from(0), 3).is_err());
        assert_eq!(p_adic_k(&BigInt::from(7), 4), Err(Error::NotPrime(4)));
    }

    #[test]
    fn log_tau_is_sum_of_log_k() {
        for m in (1..=1_000_000i64).step_by(997) {
            let f = fz(m);
            let tau = divisor_count(&f).unwrap() as f64;
            let sum: f64 = f
                .factors
                .iter()
                .map(|(p, _)| (p_adic_k(&BigInt::from(m), p.to_u64().unwrap()).unwrap() as f64).ln())
                .sum();
            assert!((tau.ln() - sum).abs() < 1e-12, "m = {m}");
        }
    }

    #[test]
    fn semiprimes_need_rho() {
        // two primes above the trial-division range
        let p = 1_000_003u64;
        let q = 1_000_033u64;
        let m = BigInt::from(p) * q;
        let f = factorize(&m, FactorBudget::default()).unwrap();
        assert_eq!(pairs(&f), vec![(p, 1), (q, 1)]);

        let big_p: BigUint = "18446744073709551557".parse().unwrap();
        let big_q = BigUint::from(1_000_000_007u64);
        let m = BigInt::from(&big_p * &big_q * &big_q);
        let f = factorize(&m, FactorBudget::default()).unwrap();
        assert_eq!(f.factors, vec![(big_q, 2), (big_p, 1)]);
    }

    #[test]
    fn exhausted_budget_is_reported() {
        let p = 1_000_000_007u64;
        let q = 998_244_353u64;
        let m = BigInt::from(p) * q * 4;
        let budget = FactorBudget {
            trial_limit: 1000,
            rho_steps: 10,
        };
        match factorize(&m, budget) {
            Err(Error::FactorizationBudget { partial, cofactor }) => {
                assert_eq!(partial, vec![(BigUint::from(2u8), 2)]);
                assert_eq!(cofactor, (BigUint::from(p) * q).to_string());
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn doubled_and_divisors() {
        let f = fz(6).doubled();
        assert_eq!(pairs(&f), vec![(2, 2), (3, 1)]);
        let mut d: Vec<u64> = f.divisors().iter().map(|x| x.to_u64().unwrap()).collect();
        d.sort();
        assert_eq!(d, vec![1, 2, 3, 4, 6, 12]);
    }

    proptest! {
        #[test]
        fn recomposition(m in any::<i64>()) {
            let f = factorize(&BigInt::from(m), FactorBudget::default()).unwrap();
            prop_assert_eq!(f.recompose(), BigInt::from(m));
            for (p, e) in &f.factors {
                prop_assert!(is_prime_u64(p.to_u64().unwrap()));
                prop_assert!(*e >= 1);
            }
            prop_assert!(f.factors.windows(2).all(|w| w[0].0 < w[1].0));
        }

        #[test]
        fn recomposition_u64(m in 1u64..) {
            let f = factorize(&BigInt::from(m), FactorBudget::default()).unwrap();
            prop_assert_eq!(f.recompose(), BigInt::from(m));
        }
    }
}
