use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Zero;

use super::factor::{factorize, FactorBudget};
use crate::error::{Error, Result};

/// All `(A, B)` with `A, B >= 0` and `A² - B² ∈ {d, -d, 2d, -2d}`.
///
/// Each target `T` is written as `(A - B)(A + B)`: for a divisor `u` of `|T|`
/// with cofactor `s = |T| / u >= u` of the same parity, `T > 0` gives
/// `((s + u)/2, (s - u)/2)` and `T < 0` the same pair swapped. Divisors of `|d|`
/// are divisors of `2|d|`, so one factorization of `2|d|` serves all four
/// targets and the result has at most `4 τ(2|d|)` elements.
pub fn square_pair_candidates(d: &BigInt, budget: FactorBudget) -> Result<BTreeSet<(BigUint, BigUint)>> {
    if d.is_zero() {
        return Err(Error::InvalidArgument("square pairs need d != 0".into()));
    }
    let f2 = factorize(d, budget)?.doubled();
    let mag = d.magnitude();
    let targets = [mag.clone(), mag * 2u32];
    let mut out = BTreeSet::new();
    for u in f2.divisors() {
        for t in &targets {
            let (s, r): (BigUint, BigUint) = t.div_rem(&u);
            if !r.is_zero() || s < u || s.is_odd() != u.is_odd() {
                continue;
            }
            let a: BigUint = (&s + &u) >> 1;
            let b: BigUint = (&s - &u) >> 1;
            out.insert((a.clone(), b.clone()));
            out.insert((b, a));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::divisor_count;
    use num_traits::ToPrimitive;

    fn brute(d: i64) -> BTreeSet<(u64, u64)> {
        let lim = 2 * d.unsigned_abs() + 1;
        let mut out = BTreeSet::new();
        for a in 0..=lim {
            for b in 0..=lim {
                let diff = (a * a) as i64 - (b * b) as i64;
                if diff == d || diff == -d || diff == 2 * d || diff == -2 * d {
                    out.insert((a, b));
                }
            }
        }
        out
    }

    fn fast(d: i64) -> BTreeSet<(u64, u64)> {
        square_pair_candidates(&BigInt::from(d), FactorBudget::default())
            .unwrap()
            .into_iter()
            .map(|(a, b)| (a.to_u64().unwrap(), b.to_u64().unwrap()))
            .collect()
    }

    #[test]
    fn worked_examples() {
        let four: BTreeSet<_> = [(2, 0), (0, 2), (3, 1), (1, 3)].into_iter().collect();
        assert_eq!(fast(4), four);
        let one: BTreeSet<_> = [(1, 0), (0, 1)].into_iter().collect();
        assert_eq!(fast(1), one);
        assert!(square_pair_candidates(&BigInt::from(0), FactorBudget::default()).is_err());
    }

    #[test]
    fn matches_brute_force_and_bound() {
        for d in (-200..=200).filter(|&d| d != 0) {
            let got = fast(d);
            assert_eq!(got, brute(d), "d = {d}");
            let tau2 = divisor_count(
                &factorize(&BigInt::from(2 * d), FactorBudget::default()).unwrap(),
            )
            .unwrap();
            assert!(got.len() as u64 <= 4 * tau2, "d = {d}");
            for (a, b) in got {
                let diff = (a * a) as i64 - (b * b) as i64;
                assert!([d, -d, 2 * d, -2 * d].contains(&diff));
            }
        }
    }
}
