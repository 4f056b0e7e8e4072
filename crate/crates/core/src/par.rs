//! Data-parallel primitives with a sequential fallback.
//!
//! With the `parallel` feature (default) work is spread over the ambient rayon
//! pool; without it, or with [`Execution::Sequential`], everything runs on the
//! calling thread. Floating-point reductions use fixed-size chunks combined in
//! index order, so results are bit-identical across execution modes and
//! thread counts.

use num_complex::Complex64;

use crate::numeric::CompensatedSum;

/// Terms per reduction chunk.
pub const CHUNK: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
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
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map<T, U, F>(exec: Execution, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Compensated Σ_{k=lo}^{hi} f(k) with a deterministic reduction order.
pub fn sum_range<F>(exec: Execution, lo: i64, hi: i64, f: F) -> CompensatedSum
where
    F: Fn(i64) -> Complex64 + Sync + Send,
{
    if hi < lo {
        return CompensatedSum::new();
    }
    let len = (hi - lo + 1) as usize;
    let starts: Vec<i64> = (0..len.div_ceil(CHUNK)).map(|c| lo + (c * CHUNK) as i64).collect();
    let chunk = |&start: &i64| {
        let end = (start + CHUNK as i64 - 1).min(hi);
        let mut acc = CompensatedSum::new();
        for k in start..=end {
            acc.add(f(k));
        }
        acc
    };
    let partials = map(exec, &starts, chunk);
    let mut total = CompensatedSum::new();
    for p in &partials {
        total.merge(p);
    }
    total
}
