//! Execution strategy for data-parallel inner loops.
//!
//! With the `parallel` feature (default) the `Parallel` strategy maps
//! work items on the rayon pool; `Sequential` always runs in order on
//! the calling thread. Without the feature both strategies are
//! sequential, so downstream code never has to care.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        Exec::Parallel
    }
}

impl Exec {
    /// Map a function over an indexed range, preserving order of results.
    pub fn map_indexed<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        {
            if self == Exec::Parallel {
                use rayon::prelude::*;
                return (0..len).into_par_iter().map(f).collect();
            }
        }
        (0..len).map(f).collect()
    }

    /// Map over a slice, preserving order.
    pub fn map_slice<'a, S, T, F>(self, items: &'a [S], f: F) -> Vec<T>
    where
        S: Sync,
        T: Send,
        F: Fn(&'a S) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        {
            if self == Exec::Parallel {
                use rayon::prelude::*;
                return items.par_iter().map(f).collect();
            }
        }
        items.iter().map(f).collect()
    }
}

/// Install a global rayon pool with `jobs` threads. Call once, early.
/// A `jobs` of 0 leaves rayon's default heuristic in place.
pub fn configure_pool(jobs: usize) {
    #[cfg(feature = "parallel")]
    {
        if jobs > 0 {
            // Ignore the error: the pool can only be built once per process.
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build_global();
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = jobs;
    }
}
