//! Seed sweeps for Monte Carlo harnesses.
//!
//! Every trial is a pure function of its seed, so results are identical
//! whether the sweep runs on the rayon pool or on the calling thread; output
//! order always follows seed order. The `parallel` feature (on by default)
//! selects the rayon path for [`map_seeds`].

use std::ops::Range;

/// Runs `f` for every seed on the calling thread.
pub fn sequential<T, F>(seeds: Range<u64>, f: F) -> Vec<T>
where
    F: Fn(u64) -> T,
{
    seeds.map(f).collect()
}

/// Runs `f` for every seed on the rayon pool.
#[cfg(feature = "parallel")]
pub fn parallel<T, F>(seeds: Range<u64>, f: F) -> Vec<T>
where
    F: Fn(u64) -> T + Sync + Send,
    T: Send,
{
    use rayon::prelude::*;
    seeds.into_par_iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_seeds<T, F>(seeds: Range<u64>, f: F) -> Vec<T>
where
    F: Fn(u64) -> T + Sync + Send,
    T: Send,
{
    parallel(seeds, f)
}

#[cfg(not(feature = "parallel"))]
pub fn map_seeds<T, F>(seeds: Range<u64>, f: F) -> Vec<T>
where
    F: Fn(u64) -> T + Sync + Send,
    T: Send,
{
    sequential(seeds, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preserves_seed_order() {
        let out = map_seeds(10..20, |s| s * 3);
        assert_eq!(out, (10..20).map(|s| s * 3).collect::<Vec<_>>());
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_matches_sequential() {
        let f = |s: u64| s.wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(17);
        assert_eq!(parallel(0..1000, f), sequential(0..1000, f));
    }
}
