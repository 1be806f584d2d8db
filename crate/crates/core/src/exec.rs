//! Data-parallel map with a sequential fallback.
//!
//! With the `parallel` feature the work runs on the rayon pool; without it
//! (or when a caller asks for sequential execution) it is a plain loop. Output
//! order always follows the input order, so callers that fold the results in
//! order get identical answers either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How to execute a batch of independent work items.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

/// `f(0), f(1), ..., f(len - 1)` collected in order.
pub fn map_indexed<T, F>(len: usize, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..len).into_par_iter().map(f).collect(),
        _ => (0..len).map(f).collect(),
    }
}

/// Splits `0..total` into `shards` contiguous ranges and maps each item,
/// running shards concurrently. Results come back in item order.
pub fn map_sharded<T, F>(total: u64, shards: usize, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    let shards = shards.max(1) as u64;
    let per = total.div_ceil(shards);
    let chunks = map_indexed(shards as usize, exec, |s| {
        let start = (s as u64 * per).min(total);
        let end = ((s as u64 + 1) * per).min(total);
        (start..end).map(&f).collect::<Vec<T>>()
    });
    chunks.into_iter().flatten().collect()
}
