//! Deterministic sharded sampling.
//!
//! A run of `K` samples is cut into shards of [`SHARD_SIZE`]. Shard `i` draws
//! from its own ChaCha8 stream `i` under the run seed, and shard results are
//! returned in shard order, so the outcome does not depend on how many
//! worker threads execute the shards.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub const SHARD_SIZE: usize = 1024;

pub fn shard_rng(seed: u64, shard: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard);
    rng
}

/// Runs `work(rng, shard_index, shard_len)` over `shards` shards and returns
/// the results in shard order.
pub fn run_shards<T, F>(shard_lens: &[usize], seed: u64, threads: usize, work: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, usize, usize) -> T + Sync + Send,
{
    let job = |i: usize| {
        let mut rng = shard_rng(seed, i as u64);
        work(&mut rng, i, shard_lens[i])
    };
    if threads <= 1 {
        return (0..shard_lens.len()).map(job).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("failed to build sampling thread pool");
    pool.install(|| (0..shard_lens.len()).into_par_iter().map(job).collect())
}

/// Splits `total` samples into fixed-size shards (the last may be shorter).
pub fn split(total: usize) -> Vec<usize> {
    let mut lens = vec![SHARD_SIZE; total / SHARD_SIZE];
    if !total.is_multiple_of(SHARD_SIZE) {
        lens.push(total % SHARD_SIZE);
    }
    lens
}
