use crate::error::{Error, Result};

use super::primes::is_prime_u64;

/// `1 - Π_{k>=1} (1 - p^-k)` with a certified truncation bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaplesLimit {
    pub p: u64,
    pub value: f64,
    /// Upper bound on `|value - limit|` from the dropped factors.
    pub truncation_error: f64,
    pub terms: u32,
}

/// Partial product up to the first `K` with `p^-K / (p - 1) < tol`.
///
/// The dropped factors satisfy `1 >= Π_{k>K} (1 - p^-k) >= 1 - Σ_{k>K} p^-k`
/// and the geometric tail is `p^-K / (p - 1)`, which bounds the error. The
/// product is accumulated in log space so that `value ≈ 1/p` keeps its
/// relative precision for large `p`.
pub fn maples_limit(p: u64, tol: f64) -> Result<MaplesLimit> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let inv = 1.0 / p as f64;
    let mut log_prod = 0.0f64;
    let mut pk = 1.0f64; // p^-k
    let mut terms = 0u32;
    let mut tail;
    loop {
        pk *= inv;
        terms += 1;
        log_prod += (-pk).ln_1p();
        tail = pk / (p as f64 - 1.0);
        if tail < tol || pk == 0.0 {
            break;
        }
    }
    Ok(MaplesLimit {
        p,
        value: -log_prod.exp_m1(),
        truncation_error: tail,
        terms,
    })
}
