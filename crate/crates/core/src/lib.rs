//! Exact and Monte Carlo measurements of the quantities that control whether
//! the determinant of a random `{0, ±1}` matrix is a perfect square.
//!
//! Entries are i.i.d. with `P(0) = 1/2` and `P(±1) = 1/4`. The crate is split
//! into the entry law ([`ensemble`]), exact determinant engines
//! ([`exactdet`]), integer arithmetic ([`arith`]), exact distributions of
//! weighted sums ([`dist`]), and seeded, shard-invariant experiments
//! ([`experiments`]).

pub mod arith;
pub mod dist;
pub mod ensemble;
pub mod error;
pub mod exec;
pub mod exactdet;
pub mod experiments;

pub use error::{Error, Result};
