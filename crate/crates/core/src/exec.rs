//! Data-parallel execution with a sequential fallback.
//!
//! With the `parallel` feature (on by default) [`Execution::Parallel`] fans work
//! out over the rayon global pool. Without it every mode runs sequentially, so
//! callers never need their own `cfg` switches.

/// How independent work items are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    /// Map `f` over `items`, preserving input order in the output.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }

    /// Map `f` over `range` and keep the minimum under `key`. Ties resolve to
    /// the earliest index, independently of scheduling.
    pub fn min_by_index<R, F, K>(
        self,
        range: std::ops::Range<usize>,
        f: F,
        key: K,
    ) -> Option<(usize, R)>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
        K: Fn(&R) -> f64 + Sync + Send,
    {
        let better = |a: (usize, R), b: (usize, R)| match key(&a.1)
            .total_cmp(&key(&b.1))
            .then(a.0.cmp(&b.0))
        {
            std::cmp::Ordering::Greater => b,
            _ => a,
        };
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                range.into_par_iter().map(|i| (i, f(i))).reduce_with(better)
            }
            _ => range.map(|i| (i, f(i))).reduce(better),
        }
    }

    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}
