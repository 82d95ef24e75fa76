//! Scoped-thread executor.

use boltzwave_core::exec::Executor;

/// Splits rows into contiguous chunks, one thread per chunk.
#[derive(Debug, Clone, Copy)]
pub struct Threads {
    workers: usize,
}

impl Threads {
    pub fn new(workers: usize) -> Self {
        Threads { workers: workers.max(1) }
    }

    /// One worker per available core.
    pub fn available() -> Self {
        Self::new(std::thread::available_parallelism().map_or(1, |n| n.get()))
    }
}

impl Executor for Threads {
    fn for_rows(&self, out: &mut [f64], row_len: usize, task: &(dyn Fn(usize, &mut [f64]) + Sync)) {
        let rows = if row_len == 0 { 0 } else { out.len() / row_len };
        if self.workers == 1 || rows < 2 {
            task(0, out);
            return;
        }
        let per = rows.div_ceil(self.workers);
        std::thread::scope(|s| {
            for (i, chunk) in out.chunks_mut(per * row_len).enumerate() {
                s.spawn(move || task(i * per, chunk));
            }
        });
    }

    fn workers(&self) -> usize {
        self.workers
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use boltzwave_core::exec::{map_rows, Serial};

    #[test]
    fn same_rows_as_serial() {
        let f = |i: usize| (i as f64).sin() * 1e3;
        let a = map_rows(&Serial, 1001, &f);
        for w in [1, 2, 3, 7, 2000] {
            assert_eq!(map_rows(&Threads::new(w), 1001, &f), a, "workers = {w}");
        }
    }
}
