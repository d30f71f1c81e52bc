//! Thin dispatch layer between rayon and plain iterators.
//!
//! Everything in this crate that scans samples (random frames, polytope
//! points, weighted tensor fields) funnels through these helpers. With the
//! default `parallel` feature the scans run on rayon; without it the same
//! code compiles to sequential loops. The `*_seq` twins are always
//! sequential so benchmarks can compare both paths in one build.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Parallel map for units of work that are individually expensive
/// (a polish run, a whole scan partition).
#[cfg(feature = "parallel")]
pub(crate) fn map_slice<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_slice<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Parallel map for cheap per-item work (sub-microsecond evaluations);
/// coarse splits keep the scheduler out of the way.
#[cfg(feature = "parallel")]
pub(crate) fn map_slice_chunked<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().with_min_len(512).map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_slice_chunked<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

pub(crate) fn map_slice_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Pairwise (cascade) summation. Deterministic for a fixed input order, no
/// matter how the per-item values were produced.
pub(crate) fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
        }
    }
}
