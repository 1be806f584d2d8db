use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `⌊√m⌋` by integer Newton iteration, checked against `r² ≤ m < (r+1)²`.
pub fn isqrt_biguint(m: &BigUint) -> BigUint {
    if m.is_zero() {
        return BigUint::zero();
    }
    if let Some(small) = m.to_u64() {
        return BigUint::from(isqrt_u64(small));
    }
    // Start above the root: 2^ceil(bits/2) > √m.
    let mut x = BigUint::one() << m.bits().div_ceil(2);
    loop {
        let y = (&x + m / &x) >> 1;
        if y >= x {
            break;
        }
        x = y;
    }
    debug_assert!(&x * &x <= *m);
    assert!(
        &x * &x <= *m && (&x + 1u32) * (&x + 1u32) > *m,
        "integer square root failed its floor check"
    );
    x
}

fn isqrt_u64(m: u64) -> u64 {
    let mut r = (m as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > m) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= m) {
        r += 1;
    }
    r
}

/// `⌊√m⌋` for a non-negative signed integer.
pub fn isqrt(m: &BigInt) -> Result<BigInt> {
    if m.sign() == Sign::Minus {
        return Err(Error::InvalidArgument(format!("isqrt of negative value {m}")));
    }
    Ok(BigInt::from(isqrt_biguint(m.magnitude())))
}

const fn residue_table<const M: usize>() -> [bool; M] {
    let mut t = [false; M];
    let mut x = 0;
    while x < M {
        t[(x * x) % M] = true;
        x += 1;
    }
    t
}

const SQ256: [bool; 256] = residue_table::<256>();
const SQ9: [bool; 9] = residue_table::<9>();
const SQ5: [bool; 5] = residue_table::<5>();
const SQ7: [bool; 7] = residue_table::<7>();
const SQ13: [bool; 13] = residue_table::<13>();

/// Whether `m = k²` for some integer `k`. Negative values are never squares.
pub fn is_perfect_square(m: &BigInt) -> bool {
    match m.sign() {
        Sign::Minus => false,
        Sign::NoSign => true,
        Sign::Plus => {
            let mag = m.magnitude();
            let low = mag.iter_u32_digits().next().unwrap_or(0);
            if !SQ256[(low & 0xff) as usize] {
                return false;
            }
            // 4095 = 9 * 5 * 7 * 13
            let r = (mag % 4095u32).to_u32().unwrap() as usize;
            if !(SQ9[r % 9] && SQ5[r % 5] && SQ7[r % 7] && SQ13[r % 13]) {
                return false;
            }
            let root = isqrt_biguint(mag);
            &root * &root == *mag
        }
    }
}
