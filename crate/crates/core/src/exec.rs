//! Execution strategy for per-prompt work inside a training step.
//!
//! Each slot derives its own random stream from `(seed, step, slot)`, so the
//! result of [`PromptExecutor::map_slots`] does not depend on how slots are
//! scheduled onto threads.

use alloc::vec::Vec;

pub trait PromptExecutor {
    /// Number of worker threads, recorded in training reports.
    fn degree(&self) -> usize;

    /// Evaluates `f(0), …, f(n - 1)` and returns the results in slot order.
    fn map_slots<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Runs every slot on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl PromptExecutor for Sequential {
    fn degree(&self) -> usize {
        1
    }

    fn map_slots<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..n).map(f).collect()
    }
}
