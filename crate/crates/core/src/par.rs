//! Data-parallel helpers with a sequential fallback.
//!
//! Batch work (census sampling, Hom enumeration, family fibres, the
//! acceptance suite) goes through these functions so that the two execution
//! strategies produce identical, order-preserving results. Without the
//! `parallel` feature, [`Strategy::Parallel`] runs sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    Parallel,
}

impl Default for Strategy {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Strategy::Parallel
        } else {
            Strategy::Sequential
        }
    }
}

/// `items.iter().map(f)`, collected in input order.
pub fn map<T, R, F>(strategy: Strategy, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match strategy {
        #[cfg(feature = "parallel")]
        Strategy::Parallel => items.par_iter().map(f).collect(),
        _ => items.iter().map(f).collect(),
    }
}

/// `(0..n).map(f)`, collected in index order.
pub fn map_range<R, F>(strategy: Strategy, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    match strategy {
        #[cfg(feature = "parallel")]
        Strategy::Parallel => (0..n).into_par_iter().map(f).collect(),
        _ => (0..n).map(f).collect(),
    }
}

/// `Σ_{i<n} f(i)`.
pub fn sum_range<F>(strategy: Strategy, n: u64, f: F) -> u64
where
    F: Fn(u64) -> u64 + Sync + Send,
{
    match strategy {
        #[cfg(feature = "parallel")]
        Strategy::Parallel => (0..n).into_par_iter().map(f).sum(),
        _ => (0..n).map(f).sum(),
    }
}
