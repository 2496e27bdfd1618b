//! Monte Carlo execution strategy.
//!
//! Reps are independent work items keyed only by their index: the harness
//! derives a fresh random stream per rep from the root seed, so a rep's
//! result is a pure function of (config, seed, index). Aggregation goes
//! through an associative, commutative [`Merge`], which makes the final
//! result identical for any worker count or scheduling order.
//!
//! The `parallel` feature (default) routes [`run_reps`] through rayon; the
//! sequential path is always compiled and exported so the two can be
//! benchmarked against each other in one binary.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Order-insensitive accumulation of per-rep results.
pub trait Merge: Default + Send {
    fn merge(&mut self, other: Self);
}

/// Element-wise counter addition; an empty vector is the merge identity.
impl Merge for Vec<u64> {
    fn merge(&mut self, other: Self) {
        if self.is_empty() {
            *self = other;
        } else if !other.is_empty() {
            debug_assert_eq!(self.len(), other.len());
            for (a, b) in self.iter_mut().zip(other) {
                *a += b;
            }
        }
    }
}

impl Merge for Vec<Vec<u64>> {
    fn merge(&mut self, other: Self) {
        if self.is_empty() {
            *self = other;
        } else if !other.is_empty() {
            debug_assert_eq!(self.len(), other.len());
            for (a, b) in self.iter_mut().zip(other) {
                a.merge(b);
            }
        }
    }
}

/// Run `reps` work items sequentially and merge the results.
pub fn run_reps_sequential<A, F>(reps: u64, f: F) -> A
where
    A: Merge,
    F: Fn(u64) -> A,
{
    let mut acc = A::default();
    for i in 0..reps {
        acc.merge(f(i));
    }
    acc
}

/// Run `reps` work items (in parallel when the `parallel` feature is on)
/// and merge the results. Output is identical to the sequential path.
#[cfg(feature = "parallel")]
pub fn run_reps<A, F>(reps: u64, f: F) -> A
where
    A: Merge,
    F: Fn(u64) -> A + Sync + Send,
{
    (0..reps)
        .into_par_iter()
        .map(f)
        .reduce(A::default, |mut a, b| {
            a.merge(b);
            a
        })
}

#[cfg(not(feature = "parallel"))]
pub fn run_reps<A, F>(reps: u64, f: F) -> A
where
    A: Merge,
    F: Fn(u64) -> A + Sync + Send,
{
    run_reps_sequential(reps, f)
}

/// Map every rep index to a value, collected in index order.
pub fn map_collect<T, F>(reps: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..reps).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..reps).map(f).collect()
    }
}
