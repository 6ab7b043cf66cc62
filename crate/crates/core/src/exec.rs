//! Data-parallel map with a sequential fallback.
//!
//! With the `parallel` feature (default) [`Execution::Parallel`] runs on rayon.
//! Without it every execution mode runs sequentially. Both paths return results
//! in input order, so output never depends on scheduling.

use crate::error::{Error, Result};

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
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            Execution::Sequential => items.iter().map(f).collect(),
            Execution::Parallel => par_map(items, f),
        }
    }

    /// Like [`Execution::map`] but stops at the first error in input order.
    pub fn try_map<T, R, F>(self, items: &[T], f: F) -> Result<Vec<R>>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> Result<R> + Sync + Send,
    {
        self.map(items, f).into_iter().collect()
    }
}

#[cfg(feature = "parallel")]
fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

/// Runs `f` with a worker count. `Some(1)` forces the sequential path,
/// `Some(n)` uses a dedicated pool of `n` threads, `None` uses the default.
pub fn with_workers<R, F>(jobs: Option<usize>, f: F) -> Result<R>
where
    R: Send,
    F: FnOnce(Execution) -> R + Send,
{
    match jobs {
        Some(0) => Err(Error::Workers("worker count must be at least 1".into())),
        Some(1) => Ok(f(Execution::Sequential)),
        Some(n) => pooled(n, f),
        None => Ok(f(Execution::default())),
    }
}

#[cfg(feature = "parallel")]
fn pooled<R, F>(n: usize, f: F) -> Result<R>
where
    R: Send,
    F: FnOnce(Execution) -> R + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| Error::Workers(e.to_string()))?;
    Ok(pool.install(|| f(Execution::Parallel)))
}

#[cfg(not(feature = "parallel"))]
fn pooled<R, F>(_n: usize, f: F) -> Result<R>
where
    R: Send,
    F: FnOnce(Execution) -> R + Send,
{
    Ok(f(Execution::Sequential))
}
