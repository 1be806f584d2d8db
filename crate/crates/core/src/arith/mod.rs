//! Integer arithmetic: square detection, factorization and divisor counts,
//! prime sieves, prime reciprocal sums, and the limiting probability that a
//! prime divides the determinant.

mod factor;
mod maples;
mod pairs;
mod primes;
mod sqrt;

pub use factor::{divisor_count, factorize, p_adic_k, FactorBudget, Factorization};
pub use maples::{maples_limit, MaplesLimit};
pub use pairs::square_pair_candidates;
pub use primes::{
    is_prime_u64, mertens_sum, prime_reciprocal_sum, primes_up_to, MertensSum,
    DYADIC_INCREMENT_CONSTANT,
};
pub use sqrt::{is_perfect_square, isqrt, isqrt_biguint};

pub(crate) use primes::pow_mod_u64 as pow_mod;
pub(crate) use primes::ratio_to_f64;
