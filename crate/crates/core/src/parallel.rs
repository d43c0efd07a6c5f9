//! Deterministic parallel map.
//!
//! Work items are evaluated on a rayon pool sized by the FSL_THREADS
//! environment variable (all cores when unset) and collected back in index
//! order, so reductions downstream are bit-stable regardless of thread count.

use rayon::prelude::*;
use std::sync::OnceLock;

fn pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Ok(v) = std::env::var("FSL_THREADS") {
            if let Ok(n) = v.trim().parse::<usize>() {
                if n >= 1 {
                    builder = builder.num_threads(n);
                }
            }
        }
        builder.build().expect("thread pool")
    })
}

/// Map f over 0..n in parallel, returning results in index order.
pub fn map_indexed<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    pool().install(|| (0..n).into_par_iter().map(f).collect())
}

/// Map f over a slice in parallel, preserving order.
pub fn map_slice<'a, S: Sync, T: Send>(
    items: &'a [S],
    f: impl Fn(&'a S) -> T + Sync + Send,
) -> Vec<T> {
    pool().install(|| items.par_iter().map(f).collect())
}
