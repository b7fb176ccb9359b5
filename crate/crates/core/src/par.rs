//! Order-preserving map over a slice, parallel when the `parallel` feature is
//! enabled and sequential otherwise.

/// Applies `f` to every item and returns the results in input order.
///
/// `jobs` is a thread-count hint: `1` runs on the calling thread, `0` uses
/// the global rayon pool, anything else a dedicated pool of that size.
#[cfg(feature = "parallel")]
pub fn ordered_map<T, R, F>(items: &[T], jobs: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;

    match jobs {
        1 => items.iter().map(f).collect(),
        0 => items.par_iter().map(f).collect(),
        n => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
            Err(_) => items.par_iter().map(f).collect(),
        },
    }
}

#[cfg(not(feature = "parallel"))]
pub fn ordered_map<T, R, F>(items: &[T], _jobs: usize, f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}
