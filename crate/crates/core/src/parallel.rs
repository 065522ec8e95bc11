//! Sharded execution of independent work items.
//!
//! Monte Carlo streams are split into fixed-size shards. Shard `j` of a stream
//! with master seed `s` draws from an RNG seeded with `s + j` (wrapping), so the
//! sample at stream position `i` is the same no matter how many workers run or
//! which execution mode is selected.

/// Samples per shard for every sharded Monte Carlo stream.
pub const SHARD_SIZE: u64 = 64;

/// Seed of shard `shard` in a stream rooted at `master_seed`.
#[inline]
pub fn shard_seed(master_seed: u64, shard: u64) -> u64 {
    master_seed.wrapping_add(shard)
}

/// How independent work items are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Rayon work stealing. Falls back to sequential without the `parallel` feature.
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel_available() -> bool {
        cfg!(feature = "parallel")
    }

    /// Evaluate `f(0..count)` and return the results in index order.
    pub fn map<T, F>(self, count: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                (0..count).into_par_iter().map(f).collect()
            }
            _ => (0..count).map(f).collect(),
        }
    }

    /// Evaluate `f` over every item of `items`, keeping input order.
    pub fn map_slice<I, T, F>(self, items: &[I], f: F) -> Vec<T>
    where
        I: Sync,
        T: Send,
        F: Fn(&I) -> T + Sync + Send,
    {
        self.map(items.len(), |i| f(&items[i]))
    }
}

/// Shard index ranges covering `[0, total)` in stream order.
pub fn shard_ranges(total: u64) -> impl Iterator<Item = (u64, std::ops::Range<u64>)> {
    let shards = total.div_ceil(SHARD_SIZE);
    (0..shards).map(move |j| {
        let start = j * SHARD_SIZE;
        (j, start..(start + SHARD_SIZE).min(total))
    })
}
