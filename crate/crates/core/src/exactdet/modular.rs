use crate::arith::is_prime_u64;
use crate::ensemble::SignedTernaryMatrix;
use crate::error::{Error, Result};

/// Montgomery arithmetic for an odd modulus below 2^63.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Montgomery {
    p: u64,
    neg_inv: u64,
    r2: u64,
}

impl Montgomery {
    pub(crate) fn new(p: u64) -> Self {
        assert!(p % 2 == 1 && p < 1 << 63, "Montgomery modulus must be odd and below 2^63");
        let mut inv = p;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        Montgomery {
            p,
            neg_inv: inv.wrapping_neg(),
            r2,
        }
    }

    #[inline(always)]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_inv);
        let u = (t.wrapping_add(m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u.wrapping_sub(self.p)
        } else {
            u
        }
    }

    #[inline(always)]
    pub(crate) fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline(always)]
    pub(crate) fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub(crate) fn to_mont(&self, a: u64) -> u64 {
        self.mul(a % self.p, self.r2)
    }

    pub(crate) fn from_mont(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    pub(crate) fn pow(&self, base: u64, mut e: u64) -> u64 {
        let mut acc = self.to_mont(1);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// Determinant of a ternary matrix, reduced into `[0, p)`.
    pub(crate) fn det(&self, m: &SignedTernaryMatrix) -> u64 {
        let n = m.n();
        let one = self.to_mont(1);
        let minus_one = self.sub(0, one);
        let mut a: Vec<u64> = m
            .entries()
            .iter()
            .map(|&v| match v {
                0 => 0,
                1 => one,
                _ => minus_one,
            })
            .collect();
        let mut acc = one;
        for c in 0..n {
            let Some(r) = (c..n).find(|&r| a[r * n + c] != 0) else {
                return 0;
            };
            if r != c {
                for j in c..n {
                    a.swap(c * n + j, r * n + j);
                }
                acc = self.sub(0, acc);
            }
            let pivot = a[c * n + c];
            acc = self.mul(acc, pivot);
            let inv = self.pow(pivot, self.p - 2);
            let (top, bottom) = a.split_at_mut((c + 1) * n);
            let pivot_row = &top[c * n..];
            for row in bottom.chunks_exact_mut(n) {
                let lead = row[c];
                if lead == 0 {
                    continue;
                }
                let f = self.mul(lead, inv);
                for j in c + 1..n {
                    row[j] = self.sub(row[j], self.mul(f, pivot_row[j]));
                }
            }
        }
        self.from_mont(acc)
    }
}

/// Montgomery arithmetic for an odd modulus below 2^31.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Montgomery32 {
    p: u32,
    neg_inv: u32,
    r2: u32,
}

impl Montgomery32 {
    pub(crate) fn new(p: u32) -> Self {
        assert!(p % 2 == 1 && p < 1 << 31, "Montgomery modulus must be odd and below 2^31");
        let mut inv = p;
        for _ in 0..5 {
            inv = inv.wrapping_mul(2u32.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = (1u64 << 32) % p as u64;
        Montgomery32 {
            p,
            neg_inv: inv.wrapping_neg(),
            r2: (r * r % p as u64) as u32,
        }
    }

    #[inline(always)]
    fn redc(&self, t: u64) -> u32 {
        let m = (t as u32).wrapping_mul(self.neg_inv);
        let u = (t.wrapping_add(m as u64 * self.p as u64) >> 32) as u32;
        if u >= self.p {
            u.wrapping_sub(self.p)
        } else {
            u
        }
    }

    #[inline(always)]
    fn mul(&self, a: u32, b: u32) -> u32 {
        self.redc(a as u64 * b as u64)
    }

    fn one(&self) -> u32 {
        self.redc(self.r2 as u64)
    }

    fn pow(&self, base: u32, mut e: u32) -> u32 {
        let mut acc = self.one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    /// Euler's criterion for a residue given in ordinary form.
    pub(crate) fn is_nonresidue(&self, a: u32) -> bool {
        let am = self.mul(a % self.p, self.r2);
        am != 0 && self.pow(am, (self.p - 1) / 2) != self.one()
    }

    /// Determinant of a ternary matrix, reduced into `[0, p)`.
    pub(crate) fn det(&self, m: &SignedTernaryMatrix) -> u32 {
        let n = m.n();
        let p = self.p;
        let one = self.one();
        let mut a: Vec<u32> = m
            .entries()
            .iter()
            .map(|&v| match v {
                0 => 0,
                1 => one,
                _ => p - one,
            })
            .collect();
        let mut acc = one;
        for c in 0..n {
            let Some(r) = (c..n).find(|&r| a[r * n + c] != 0) else {
                return 0;
            };
            if r != c {
                for j in c..n {
                    a.swap(c * n + j, r * n + j);
                }
                acc = p - acc;
            }
            let pivot = a[c * n + c];
            acc = self.mul(acc, pivot);
            let inv = self.pow(pivot, p - 2);
            let (top, bottom) = a.split_at_mut((c + 1) * n);
            let pivot_row = &top[c * n + c + 1..(c + 1) * n];
            for row in bottom.chunks_exact_mut(n) {
                let lead = row[c];
                if lead == 0 {
                    continue;
                }
                // row += f * pivot_row with f = -lead / pivot
                let f = p - self.mul(lead, inv);
                for (x, &y) in row[c + 1..].iter_mut().zip(pivot_row) {
                    let s = self.mul(f, y).wrapping_add(*x);
                    *x = if s >= p { s.wrapping_sub(p) } else { s };
                }
            }
        }
        self.redc(acc as u64)
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    crate::arith::pow_mod(a, p - 2, p)
}

// Plain elimination with `%` reductions; handles p = 2 and moduli >= 2^63.
fn det_mod_plain(m: &SignedTernaryMatrix, p: u64) -> u64 {
    let n = m.n();
    let mut a: Vec<u64> = m
        .entries()
        .iter()
        .map(|&v| match v {
            0 => 0,
            1 => 1 % p,
            _ => p - 1,
        })
        .collect();
    let mut acc = 1 % p;
    for c in 0..n {
        let Some(r) = (c..n).find(|&r| a[r * n + c] != 0) else {
            return 0;
        };
        if r != c {
            for j in c..n {
                a.swap(c * n + j, r * n + j);
            }
            acc = (p - acc) % p;
        }
        let pivot = a[c * n + c];
        acc = mul_mod(acc, pivot, p);
        let inv = inv_mod(pivot, p);
        for i in c + 1..n {
            let lead = a[i * n + c];
            if lead == 0 {
                continue;
            }
            let f = mul_mod(lead, inv, p);
            for j in c + 1..n {
                let t = mul_mod(f, a[c * n + j], p);
                a[i * n + j] = (a[i * n + j] + p - t) % p;
            }
        }
    }
    acc
}

/// `det M mod p`, in `[0, p)`.
pub fn det_mod_p(m: &SignedTernaryMatrix, p: u64) -> Result<u64> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 || p >= 1 << 63 {
        Ok(det_mod_plain(m, p))
    } else if p < 1 << 31 {
        Ok(u64::from(Montgomery32::new(p as u32).det(m)))
    } else {
        Ok(Montgomery::new(p).det(m))
    }
}

/// Rank over 𝔽_p of a `rows x cols` matrix given row-major as signed integers.
pub fn rank_mod_p(entries: &[i64], rows: usize, cols: usize, p: u64) -> Result<usize> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    assert_eq!(entries.len(), rows * cols);
    let mut a: Vec<u64> = entries
        .iter()
        .map(|&v| v.rem_euclid(p as i64) as u64)
        .collect();
    let mut rank = 0;
    for c in 0..cols {
        let Some(r) = (rank..rows).find(|&r| a[r * cols + c] != 0) else {
            continue;
        };
        for j in 0..cols {
            a.swap(rank * cols + j, r * cols + j);
        }
        let inv = inv_mod(a[rank * cols + c], p);
        for i in rank + 1..rows {
            let lead = a[i * cols + c];
            if lead == 0 {
                continue;
            }
            let f = mul_mod(lead, inv, p);
            for j in c..cols {
                let t = mul_mod(f, a[rank * cols + j], p);
                a[i * cols + j] = (a[i * cols + j] + p - t) % p;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    Ok(rank)
}
