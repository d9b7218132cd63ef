//! Thread-pool sweeps and a memoizing distance oracle.

use std::collections::HashMap;
use std::sync::Mutex;

use rayon::prelude::*;

use curvlab_core::compare::{DistanceOracle, Measured, RegionOracle, Sweeper};
use curvlab_core::{Point2, Rect, Result as CoreResult};

/// Environment variable capping the worker count.
pub const THREADS_VAR: &str = "CURVLAB_THREADS";

/// Runs sweep items on a rayon pool; results keep index order, so output is
/// independent of the worker count.
pub struct RayonSweeper {
    pool: rayon::ThreadPool,
}

impl RayonSweeper {
    pub fn with_threads(threads: usize) -> Self {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool");
        Self { pool }
    }

    /// Pool sized by `CURVLAB_THREADS` when set to a positive integer,
    /// rayon's default otherwise.
    pub fn from_env() -> Self {
        let threads = std::env::var(THREADS_VAR).ok().and_then(|v| v.trim().parse::<usize>().ok()).unwrap_or(0);
        Self::with_threads(threads)
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Sweeper for RayonSweeper {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool.install(|| (0..n).into_par_iter().map(f).collect())
    }
}

type Key = (u64, u64, u64, u64);

fn key(a: Point2, b: Point2) -> Key {
    let (a, b) = if (a.x, a.y) <= (b.x, b.y) { (a, b) } else { (b, a) };
    (a.x.to_bits(), a.y.to_bits(), b.x.to_bits(), b.y.to_bits())
}

/// Caches distances of an expensive oracle by unordered point pair.
pub struct MemoOracle<O> {
    inner: O,
    cache: Mutex<HashMap<Key, Measured>>,
}

impl<O> MemoOracle<O> {
    pub fn new(inner: O) -> Self {
        Self { inner, cache: Mutex::new(HashMap::new()) }
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }

    pub fn cached(&self) -> usize {
        self.cache.lock().unwrap().len()
    }
}

impl<O: DistanceOracle<Point = Point2>> DistanceOracle for MemoOracle<O> {
    type Point = Point2;

    fn distance(&self, a: Point2, b: Point2) -> CoreResult<Measured> {
        let k = key(a, b);
        if let Some(m) = self.cache.lock().unwrap().get(&k) {
            return Ok(*m);
        }
        let (a, b) = if (a.x, a.y) <= (b.x, b.y) { (a, b) } else { (b, a) };
        let m = self.inner.distance(a, b)?;
        self.cache.lock().unwrap().insert(k, m);
        Ok(m)
    }
}

impl<O: RegionOracle> RegionOracle for MemoOracle<O> {
    fn region(&self) -> Rect {
        self.inner.region()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use curvlab_core::compare::ModelOracle;

    #[test]
    fn sweeper_keeps_order() {
        let s = RayonSweeper::with_threads(3);
        assert_eq!(s.map(100, |i| i * i), (0..100).map(|i| i * i).collect::<Vec<_>>());
    }

    #[test]
    fn memo_is_symmetric() {
        let m = MemoOracle::new(ModelOracle::new(1.0).unwrap());
        let (a, b) = (Point2::new(0.1, 0.2), Point2::new(-0.3, 0.4));
        let d1 = m.distance(a, b).unwrap();
        let d2 = m.distance(b, a).unwrap();
        assert_eq!(d1, d2);
        assert_eq!(m.cached(), 1);
    }
}
