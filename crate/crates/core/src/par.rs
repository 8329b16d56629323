//! Order-preserving data-parallel maps with a sequential fallback.
//!
//! Every grid workload in the crate (velocity sweeps, angle scans, parameter
//! scans) funnels through [`map`]. Results always come back in input order,
//! so output is identical whichever [`Execution`] mode is chosen.

/// How a grid workload is executed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Execution {
    /// Plain iterator on the calling thread.
    Sequential,
    /// Rayon work stealing when the `parallel` feature is enabled; otherwise
    /// identical to [`Execution::Sequential`].
    #[default]
    Parallel,
}

impl Execution {
    /// True when this mode will actually use worker threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Applies `f` to every item, returning results in input order.
pub fn map<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}
