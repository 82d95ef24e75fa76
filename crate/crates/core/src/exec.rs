//! Row-parallel execution hook.
//!
//! Numerical kernels fill an output buffer in independent row blocks. An
//! executor decides how blocks are scheduled. Each row is computed by the
//! same code regardless of scheduling, so results do not depend on the
//! executor or the worker count.

/// Schedules `task(first_row, rows)` over disjoint chunks of `out`.
///
/// `out.len()` must be a multiple of `row_len`. Implementations must call
/// `task` exactly once for every row.
pub trait Executor: Sync {
    fn for_rows(&self, out: &mut [f64], row_len: usize, task: &(dyn Fn(usize, &mut [f64]) + Sync));

    fn workers(&self) -> usize {
        1
    }
}

/// Runs everything on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Serial;

impl Executor for Serial {
    fn for_rows(&self, out: &mut [f64], _row_len: usize, task: &(dyn Fn(usize, &mut [f64]) + Sync)) {
        task(0, out);
    }
}

/// Convenience: one value per index.
pub fn map_rows(exec: &dyn Executor, n: usize, f: &(dyn Fn(usize) -> f64 + Sync)) -> alloc::vec::Vec<f64> {
    let mut out = alloc::vec![0.0; n];
    exec.for_rows(&mut out, 1, &|first, chunk| {
        for (i, slot) in chunk.iter_mut().enumerate() {
            *slot = f(first + i);
        }
    });
    out
}
