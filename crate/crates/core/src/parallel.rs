//! Worker-pool plumbing shared by the cell-parallel computations.

use rayon::{ThreadPool, ThreadPoolBuilder};

/// Builds a pool with `jobs` workers (at least one).
pub fn pool(jobs: usize) -> ThreadPool {
    ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool construction")
}

/// Runs `f` inside a pool of `jobs` workers. All parallel iterators used by
/// this crate collect in input order, so results do not depend on `jobs`.
pub fn with_jobs<R: Send>(jobs: usize, f: impl FnOnce() -> R + Send) -> R {
    pool(jobs).install(f)
}
