//! Execution strategy for the grid searches.
//!
//! Grid evaluations are independent, so they can be spread over a rayon
//! pool when the `parallel` feature is on. Results are collected in input
//! order either way, which keeps every downstream argmax deterministic.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How independent grid points are evaluated.
/// The default is `Parallel` when that feature is enabled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    /// Plain iterator on the calling thread.
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    /// Rayon work-stealing pool.
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

impl Exec {
    /// Map `f` over `0..n`, returning results in index order.
    pub fn map_indexed<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n).into_par_iter().map(f).collect(),
            Exec::Sequential => (0..n).map(f).collect(),
        }
    }
}
