//! Replica fan-out.
//!
//! With the `parallel` feature (default) replicas run on the rayon pool;
//! without it, or when [`Execution::Sequential`] is requested, they run in
//! a plain loop. Results always come back indexed by replica, so any
//! reduction done by the caller is independent of scheduling.

use crate::rng::{substream, StackRng};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// True when this build can actually run replicas concurrently.
    pub fn is_parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

/// Runs `f(rng_i, i)` for `i in 0..reps`, with `rng_i = substream(seed, i)`.
pub fn replicate<T, F>(exec: Execution, seed: u64, reps: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut StackRng, usize) -> T + Sync + Send,
{
    map_indices(exec, reps, |i| {
        let mut rng = substream(seed, i as u64);
        f(&mut rng, i)
    })
}

/// Order-preserving map over `0..n`.
pub fn map_indices<T, F>(exec: Execution, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(f).collect()
        }
        _ => (0..n).map(f).collect(),
    }
}
