use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};
use reo_core::exec::PromptExecutor;

use crate::error::{ReoError, Result};

/// Runs prompt slots on a dedicated pool of `threads` workers.
///
/// Slot results are collected in slot order, and every slot seeds its own
/// random stream, so output is identical for any thread count.
pub struct RayonExecutor {
    pool: ThreadPool,
    threads: usize,
}

impl RayonExecutor {
    pub fn new(threads: usize) -> Result<Self> {
        if threads == 0 {
            return Err(ReoError::Usage("--threads must be at least 1".into()));
        }
        let pool = ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| ReoError::Usage(format!("cannot start thread pool: {e}")))?;
        Ok(Self { pool, threads })
    }
}

impl PromptExecutor for RayonExecutor {
    fn degree(&self) -> usize {
        self.threads
    }

    fn map_slots<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool
            .install(|| (0..n).into_par_iter().map(&f).collect())
    }
}
