//! Data-parallel execution of independent work items.
//!
//! With the `parallel` feature (default) work items run on the rayon pool;
//! without it every backend runs sequentially. Results are always returned in
//! index order, so output never depends on the backend or thread count.

/// Environment variable that caps the rayon worker count for the CLI.
pub const WORKERS_ENV: &str = "GATETHERM_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    Sequential,
    /// Falls back to sequential when built without the `parallel` feature.
    #[default]
    Parallel,
}

impl Backend {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Backend::Parallel
    }
}

/// `(0..n).map(f)` collected in index order.
pub fn map_indexed<T, F>(backend: Backend, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if backend.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = backend;
    (0..n).map(f).collect()
}

/// Configures the global pool from [`WORKERS_ENV`]. Returns the worker count
/// that was requested, if any.
pub fn init_workers_from_env() -> Option<usize> {
    let n = std::env::var(WORKERS_ENV).ok()?.trim().parse::<usize>().ok()?;
    if n == 0 {
        return None;
    }
    #[cfg(feature = "parallel")]
    {
        // a second initialization is harmless and reported as an error by rayon
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Some(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn backends_agree_and_keep_order() {
        let f = |i: usize| (i as f64).sqrt() * 3.0;
        let seq = map_indexed(Backend::Sequential, 1000, f);
        let par = map_indexed(Backend::Parallel, 1000, f);
        assert_eq!(seq, par);
        assert_eq!(seq[9], 9.0);
    }
}
