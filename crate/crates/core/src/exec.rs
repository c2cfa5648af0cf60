//! Sequential/parallel dispatch for the data-parallel sweeps.
//!
//! Built with the `parallel` feature (the default), `ExecMode::Parallel`
//! fans work out over rayon's pool; without it, both modes run sequentially.
//! Results are collected in input order either way, so a computation's
//! output never depends on the mode.

/// Execution strategy for enumeration and verification drivers.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Default)]
pub enum ExecMode {
    Sequential,
    #[default]
    Parallel,
}

#[cfg(feature = "parallel")]
pub(crate) fn map_collect<T, R, F>(mode: ExecMode, items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    match mode {
        ExecMode::Sequential => items.into_iter().map(f).collect(),
        ExecMode::Parallel => items.into_par_iter().map(f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_collect<T, R, F>(_mode: ExecMode, items: Vec<T>, f: F) -> Vec<R>
where
    F: Fn(T) -> R,
{
    items.into_iter().map(f).collect()
}
