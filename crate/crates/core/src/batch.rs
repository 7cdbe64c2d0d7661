//! Data-parallel helpers for independent runs (instances, seeds, modes).
//!
//! With the `parallel` feature (default) these go through rayon; without it
//! they fall back to plain iterators. Results always come back in input
//! order.

use crate::model::Instance;
use crate::propagator::{propagate, Propagation};

/// Maps `f` over `items`, in parallel when the `parallel` feature is on.
#[cfg(feature = "parallel")]
pub fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    seq_map(items, f)
}

/// Always sequential. Used where timings must not interfere.
pub fn seq_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// Propagates every instance from its initial bounds.
pub fn propagate_all(instances: &[Instance]) -> Vec<Propagation> {
    par_map(instances, |i| propagate(i, &mut i.bounds.clone()))
}

/// Sequential counterpart of [`propagate_all`].
pub fn propagate_all_seq(instances: &[Instance]) -> Vec<Propagation> {
    seq_map(instances, |i| propagate(i, &mut i.bounds.clone()))
}
