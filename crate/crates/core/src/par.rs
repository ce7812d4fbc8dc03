//! Data-parallel map helpers.
//!
//! Identity suites and complex assembly are embarrassingly parallel over
//! samples and graded pieces. With the `parallel` feature (default) the
//! work runs on the rayon pool; without it the same call is a plain
//! sequential map. Results always come back in input order, so output is
//! deterministic either way. `map_serial` is always available so the
//! benchmarks can compare both paths in one build.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `items`, in parallel when the `parallel` feature is on.
pub fn map_items<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().map(f).collect()
    }
}

/// Sequential map with the same signature, for benchmark comparison.
pub fn map_serial<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preserves_order() {
        let xs: Vec<usize> = (0..100).collect();
        let ys = map_items(xs.clone(), |x| x * x);
        let zs = map_serial(xs, |x| x * x);
        assert_eq!(ys, zs);
    }
}
