//! Pluggable map-over-index execution.
//!
//! Every parallel section in the kernel is phrased as "evaluate a pure
//! function on `0..len` and collect the results in index order"; reductions
//! run afterwards on the ordered vector. Any executor honouring that
//! contract yields results identical to [`Serial`].

use alloc::vec::Vec;

pub trait Executor: Sync {
    /// Evaluates `f(0), f(1), .., f(len - 1)` and returns them in order.
    fn map_range<T, F>(&self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync;
}

/// Single-threaded reference executor.
#[derive(Debug, Clone, Copy, Default)]
pub struct Serial;

impl Executor for Serial {
    fn map_range<T, F>(&self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        (0..len).map(f).collect()
    }
}

impl<E: Executor> Executor for &E {
    fn map_range<T, F>(&self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        (**self).map_range(len, f)
    }
}
