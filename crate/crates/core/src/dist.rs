//! Exact distributions of `Σ ξ_i a_i` over ℤ and over 𝔽_p, and exact checks
//! of the two anti-concentration facts used by the argument: the point
//! probability of a `ξ`-weighted sum peaks at zero, and a family of patterns
//! at pairwise Hamming distance `>= 2` in `{0,±1}^k` has `ξ`-mass at most `1/k`.
//!
//! Probabilities are dyadic. A distribution stores integer numerators over a
//! common denominator `4^e`, where `e` counts the coefficients that actually
//! move the sum (zero coefficients fold in as the identity).

use std::collections::HashSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::is_prime_u64;
use crate::ensemble::{Xi, XiSampler};
use crate::error::{Error, Result};

/// Default cap on the number of distinct reachable values.
pub const RANGE_CAP: usize = 10_000_000;

// u128 numerators hold 4^63.
const MAX_MOVING_TERMS: u32 = 63;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Integers,
    ModP(u64),
}

/// Exact law of a weighted `ξ` sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumDistribution {
    domain: Domain,
    /// `(value, numerator)` sorted by value; zero numerators omitted.
    support: Vec<(i64, u128)>,
    /// Denominator is `4^denom_exp`.
    denom_exp: u32,
}

impl SumDistribution {
    fn point_mass(domain: Domain) -> Self {
        SumDistribution {
            domain,
            support: vec![(0, 1)],
            denom_exp: 0,
        }
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn support_len(&self) -> usize {
        self.support.len()
    }

    fn denominator(&self) -> BigInt {
        BigInt::from(1u8) << (2 * self.denom_exp)
    }

    fn numerator(&self, x: i64) -> u128 {
        self.support
            .binary_search_by_key(&x, |&(v, _)| v)
            .map_or(0, |i| self.support[i].1)
    }

    /// `P(sum = x)`; over 𝔽_p, `x` is reduced first.
    pub fn prob(&self, x: i64) -> BigRational {
        let x = match self.domain {
            Domain::Integers => x,
            Domain::ModP(p) => x.rem_euclid(p as i64),
        };
        BigRational::new(BigInt::from(self.numerator(x)), self.denominator())
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, BigRational)> + '_ {
        let den = self.denominator();
        self.support
            .iter()
            .map(move |&(v, c)| (v, BigRational::new(BigInt::from(c), den.clone())))
    }

    /// Sum of all probabilities (exactly one by construction).
    pub fn total(&self) -> BigRational {
        let num: BigUint = self.support.iter().map(|&(_, c)| BigUint::from(c)).sum();
        BigRational::new(BigInt::from(num), self.denominator())
    }

    /// Largest point probability and the values attaining it.
    pub fn max_prob(&self) -> (BigRational, Vec<i64>) {
        let best = self.support.iter().map(|&(_, c)| c).max().unwrap_or(0);
        let at = self
            .support
            .iter()
            .filter(|&&(_, c)| c == best)
            .map(|&(v, _)| v)
            .collect();
        (BigRational::new(BigInt::from(best), self.denominator()), at)
    }

    /// `P(x) == P(-x)` for every `x` (meaningful over ℤ).
    pub fn is_symmetric(&self) -> bool {
        self.support
            .iter()
            .all(|&(v, c)| self.numerator(-v) == c)
    }

    /// Push-forward along `ℤ -> 𝔽_p`.
    pub fn reduce_mod(&self, p: u64) -> Result<SumDistribution> {
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        let mut dense = vec![0u128; p as usize];
        for &(v, c) in &self.support {
            dense[v.rem_euclid(p as i64) as usize] += c;
        }
        Ok(SumDistribution {
            domain: Domain::ModP(p),
            support: dense_to_support(&dense),
            denom_exp: self.denom_exp,
        })
    }

    /// `max_x |P(x) - 1/p|` over 𝔽_p, exact.
    pub fn sup_deviation_from_uniform(&self) -> Result<BigRational> {
        let Domain::ModP(p) = self.domain else {
            return Err(Error::InvalidArgument(
                "deviation from uniform is defined over F_p".into(),
            ));
        };
        let uniform = BigRational::new(1.into(), BigInt::from(p));
        let mut worst = BigRational::zero();
        for x in 0..p as i64 {
            let dev = (self.prob(x) - &uniform).abs();
            if dev > worst {
                worst = dev;
            }
        }
        Ok(worst)
    }
}

fn dense_to_support(dense: &[u128]) -> Vec<(i64, u128)> {
    dense
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(v, &c)| (v as i64, c))
        .collect()
}

/// Exact law of `Σ ξ_i a_i` over ℤ, with the default range cap.
pub fn exact_sum_distribution(a: &[i64]) -> Result<SumDistribution> {
    exact_sum_distribution_with_cap(a, RANGE_CAP)
}

/// Folds each coefficient into the law: weight 2 stays, weight 1 each moves
/// by `±a_i`, over a denominator of 4.
pub fn exact_sum_distribution_with_cap(a: &[i64], cap: usize) -> Result<SumDistribution> {
    let mut dist = SumDistribution::point_mass(Domain::Integers);
    let mut scratch = Vec::new();
    for &ai in a.iter().filter(|&&x| x != 0) {
        if dist.denom_exp == MAX_MOVING_TERMS {
            return Err(Error::RangeCap(format!(
                "more than {MAX_MOVING_TERMS} nonzero coefficients"
            )));
        }
        let shift = ai.checked_abs().ok_or_else(|| Error::RangeCap("coefficient overflow".into()))?;
        let (lo, hi) = (dist.support[0].0, dist.support[dist.support.len() - 1].0);
        if lo.checked_sub(shift).is_none() || hi.checked_add(shift).is_none() {
            return Err(Error::RangeCap("sum leaves the i64 range".into()));
        }
        merge_fold(&dist.support, shift, &mut scratch);
        if scratch.len() > cap {
            return Err(Error::RangeCap(format!(
                "{} reachable values exceed the cap of {cap}",
                scratch.len()
            )));
        }
        std::mem::swap(&mut dist.support, &mut scratch);
        dist.denom_exp += 1;
    }
    Ok(dist)
}

// Three-way merge of (v - s, c), (v, 2c), (v + s, c) over a sorted support.
fn merge_fold(src: &[(i64, u128)], s: i64, out: &mut Vec<(i64, u128)>) {
    out.clear();
    out.reserve(src.len() * 3);
    let (mut i, mut j, mut k) = (0, 0, 0);
    let n = src.len();
    loop {
        let a = if i < n { Some(src[i].0 - s) } else { None };
        let b = if j < n { Some(src[j].0) } else { None };
        let c = if k < n { Some(src[k].0 + s) } else { None };
        let Some(v) = [a, b, c].into_iter().flatten().min() else {
            break;
        };
        let mut acc = 0u128;
        if a == Some(v) {
            acc += src[i].1;
            i += 1;
        }
        if b == Some(v) {
            acc += 2 * src[j].1;
            j += 1;
        }
        if c == Some(v) {
            acc += src[k].1;
            k += 1;
        }
        out.push((v, acc));
    }
}

/// Exact law of `Σ ξ_i a_i` over 𝔽_p, `O(len(a) · p)`.
pub fn exact_sum_distribution_mod_p(a: &[i64], p: u64) -> Result<SumDistribution> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if p as usize > RANGE_CAP {
        return Err(Error::RangeCap(format!("p = {p} exceeds the range cap")));
    }
    let pi = p as i64;
    let mut dense = vec![0u128; p as usize];
    dense[0] = 1;
    let mut next = vec![0u128; p as usize];
    let mut denom_exp = 0;
    for s in a.iter().map(|&x| x.rem_euclid(pi) as usize).filter(|&s| s != 0) {
        if denom_exp == MAX_MOVING_TERMS {
            return Err(Error::RangeCap(format!(
                "more than {MAX_MOVING_TERMS} coefficients nonzero mod {p}"
            )));
        }
        let pu = p as usize;
        for x in 0..pu {
            next[x] = 2 * dense[x] + dense[(x + pu - s) % pu] + dense[(x + s) % pu];
        }
        std::mem::swap(&mut dense, &mut next);
        denom_exp += 1;
    }
    Ok(SumDistribution {
        domain: Domain::ModP(p),
        support: dense_to_support(&dense),
        denom_exp,
    })
}

/// Same as [`exact_sum_distribution_mod_p`] for arbitrary-precision coefficients.
pub fn exact_sum_distribution_mod_p_big(a: &[BigInt], p: u64) -> Result<SumDistribution> {
    let modulus = BigInt::from(p);
    let reduced: Vec<i64> = a
        .iter()
        .map(|x| {
            let r = ((x % &modulus) + &modulus) % &modulus;
            r.to_i64().expect("residue fits in i64")
        })
        .collect();
    exact_sum_distribution_mod_p(&reduced, p)
}

/// Outcome of the point-probability check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourierCheck {
    pub max_prob: BigRational,
    pub p_zero: BigRational,
    /// `max_prob == p_zero`, i.e. no value is strictly likelier than zero.
    pub verdict: bool,
}

pub fn check_fourier_lemma(a: &[i64]) -> Result<FourierCheck> {
    let dist = exact_sum_distribution(a)?;
    let (max_prob, _) = dist.max_prob();
    let p_zero = dist.prob(0);
    let verdict = p_zero >= max_prob;
    Ok(FourierCheck {
        max_prob,
        p_zero,
        verdict,
    })
}

/// Every `a ∈ {-range..=range}^len` for `len <= max_len`, checked exactly.
/// Returns `(vectors checked, failures)`.
pub fn fourier_sweep(max_len: usize, range: i64, exec: crate::exec::Execution) -> Result<(u64, Vec<Vec<i64>>)> {
    let width = (2 * range + 1) as u64;
    let mut checked = 0;
    let mut failures = Vec::new();
    for len in 0..=max_len {
        let count = width.pow(len as u32);
        let results = crate::exec::map_indexed(count as usize, exec, |idx| {
            let mut rem = idx as u64;
            let a: Vec<i64> = (0..len)
                .map(|_| {
                    let d = (rem % width) as i64 - range;
                    rem /= width;
                    d
                })
                .collect();
            check_fourier_lemma(&a).map(|c| (a, c.verdict))
        });
        for r in results {
            let (a, ok) = r?;
            checked += 1;
            if !ok {
                failures.push(a);
            }
        }
    }
    Ok((checked, failures))
}

/// Characteristic function `φ(t) = Π ½(1 + cos(a_i t))`, always in `[0, 1]`.
pub fn char_fn(a: &[i64], t: f64) -> f64 {
    a.iter().map(|&ai| 0.5 * (1.0 + (ai as f64 * t).cos())).product()
}

/// `P(Σ ξ_i a_i = x)` recovered by inverting `φ` with an `m`-point rule over
/// one period. The rule is exact once `m` exceeds twice the spread of the sum.
pub fn invert_char_fn(a: &[i64], x: i64, m: usize) -> f64 {
    let h = 2.0 * std::f64::consts::PI / m as f64;
    (0..m)
        .map(|i| {
            let t = -std::f64::consts::PI + (i as f64 + 0.5) * h;
            char_fn(a, t) * (x as f64 * t).cos()
        })
        .sum::<f64>()
        / m as f64
}

pub fn hamming(v: &[Xi], w: &[Xi]) -> usize {
    v.iter().zip(w).filter(|(a, b)| a != b).count()
}

/// Patterns in `{0,±1}^k` at pairwise Hamming distance `>= 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsolatedFamily {
    k: usize,
    members: Vec<Vec<Xi>>,
}

impl IsolatedFamily {
    /// Validates lengths, distinctness and pairwise distance.
    pub fn new(k: usize, members: Vec<Vec<Xi>>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("isolated families need k >= 1".into()));
        }
        if let Some(bad) = members.iter().find(|m| m.len() != k) {
            return Err(Error::InvalidArgument(format!(
                "pattern of length {} in a family of length {k}",
                bad.len()
            )));
        }
        if !is_2_isolated(&members) {
            return Err(Error::InvalidArgument("family is not 2-isolated".into()));
        }
        Ok(IsolatedFamily { k, members })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn members(&self) -> &[Vec<Xi>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Whether the Hamming balls of radius one around members are pairwise
    /// disjoint, decided by comparing the size of their union with the sum of
    /// their sizes `1 + 2k`.
    pub fn balls_disjoint(&self) -> bool {
        let mut union: HashSet<Vec<Xi>> = HashSet::new();
        for v in &self.members {
            union.insert(v.clone());
            for i in 0..self.k {
                for x in Xi::DIGITS {
                    if x != v[i] {
                        let mut w = v.clone();
                        w[i] = x;
                        union.insert(w);
                    }
                }
            }
        }
        union.len() == self.members.len() * (1 + 2 * self.k)
    }
}

/// Pairwise Hamming distance `>= 2` (distinct members included).
pub fn is_2_isolated(members: &[Vec<Xi>]) -> bool {
    members
        .iter()
        .enumerate()
        .all(|(i, v)| members[i + 1..].iter().all(|w| hamming(v, w) >= 2))
}

/// Exact `ξ`-mass of a set of patterns of common length `k`.
pub fn pattern_mass(members: &[Vec<Xi>], k: usize) -> BigRational {
    let num: BigUint = members
        .iter()
        .map(|m| BigUint::from(1u8) << m.iter().filter(|x| **x == Xi::Zero).count())
        .sum();
    BigRational::new(BigInt::from(num), BigInt::from(1u8) << (2 * k))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsolatedCheck {
    pub mass: BigRational,
    pub bound: BigRational,
    pub verdict: bool,
}

/// `P(ξ ∈ E)` against `1/k`, exactly.
pub fn verify_2_isolated(family: &IsolatedFamily) -> IsolatedCheck {
    let mass = pattern_mass(&family.members, family.k);
    let bound = BigRational::new(1.into(), BigInt::from(family.k));
    let verdict = mass <= bound;
    IsolatedCheck {
        mass,
        bound,
        verdict,
    }
}

/// Greedy rejection sampling of a 2-isolated family. Candidates are drawn from
/// the `ξ` law; the search stops at `target_size` members or after
/// `64 * target_size + 256` draws, whichever comes first.
pub fn random_2_isolated_family(k: usize, target_size: usize, sampler: &mut XiSampler) -> Result<IsolatedFamily> {
    if k == 0 {
        return Err(Error::InvalidArgument("isolated families need k >= 1".into()));
    }
    let mut members: Vec<Vec<Xi>> = Vec::new();
    let attempts = 64 * target_size + 256;
    for _ in 0..attempts {
        if members.len() >= target_size {
            break;
        }
        let candidate = sampler.sample_vector(k);
        if members.iter().all(|m| hamming(m, &candidate) >= 2) {
            members.push(candidate);
        }
    }
    IsolatedFamily::new(k, members)
}
