//! Worker-count aware helpers. With the `parallel` feature the work runs on a
//! dedicated rayon pool; without it (or with one worker) everything runs on
//! the calling thread. Results are always ordered by task index, so output
//! never depends on how many workers were used.

/// Number of workers; `0` means "use the machine's available parallelism".
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Workers(pub usize);

impl Workers {
    pub const SEQUENTIAL: Workers = Workers(1);

    pub fn resolve(self) -> usize {
        if self.0 > 0 {
            self.0
        } else {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        }
    }
}

/// Evaluate `f(0), …, f(count - 1)` and return the results in index order.
pub fn map_indexed<T, F>(count: usize, workers: Workers, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Send + Sync,
{
    #[cfg(feature = "parallel")]
    {
        let threads = workers.resolve();
        if threads > 1 && count > 1 {
            use rayon::prelude::*;
            match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
                Ok(pool) => return pool.install(|| (0..count).into_par_iter().map(&f).collect()),
                Err(_) => return (0..count).map(f).collect(),
            }
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = workers;
    (0..count).map(f).collect()
}

/// Fallible variant of [`map_indexed`]; returns the error of the lowest failing
/// index.
pub fn try_map_indexed<T, E, F>(count: usize, workers: Workers, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> Result<T, E> + Send + Sync,
{
    map_indexed(count, workers, f).into_iter().collect()
}

/// Split `total` items into fixed-size chunks. The chunking depends only on
/// `total` and `chunk`, never on the worker count.
pub fn chunks(total: u64, chunk: u64) -> Vec<(u64, u64)> {
    let chunk = chunk.max(1);
    let mut out = Vec::with_capacity(total.div_ceil(chunk) as usize);
    let mut start = 0;
    while start < total {
        let len = chunk.min(total - start);
        out.push((start, len));
        start += len;
    }
    out
}
