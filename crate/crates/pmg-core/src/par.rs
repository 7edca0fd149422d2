//! Thin switch between rayon and sequential execution.
//!
//! The decompositions below are bit-deterministic either way: rows are
//! updated independently and per-column solves never split a floating-point
//! sum, so enabling the `parallel` feature changes timing only.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub(crate) fn for_each_row<S, F>(rows: &mut [S], width: usize, parallel: bool, f: F)
where
    S: Send,
    F: Fn(&mut [S]) + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        rows.par_chunks_mut(width).for_each(&f);
        return;
    }
    let _ = parallel;
    rows.chunks_mut(width).for_each(f);
}

pub(crate) fn map_indices<T, F>(count: usize, parallel: bool, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return (0..count).into_par_iter().map(f).collect();
    }
    let _ = parallel;
    (0..count).map(f).collect()
}

/// True when the build carries the rayon path.
pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}
