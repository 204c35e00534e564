//! Data-parallel helpers. With the `parallel` feature the work runs on rayon; without it,
//! or with [`Execution::Sequential`], it runs on the calling thread.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[derive(Default)]
pub enum Execution {
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}


/// Order-preserving map over a slice.
pub fn map<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        Execution::Sequential => items.iter().map(f).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.par_iter().map(f).collect(),
    }
}

/// Fold over `0..len` in chunks, then combine the chunk results.
pub fn fold_range<A, F, C>(exec: Execution, len: u64, chunk: u64, init: impl Fn() -> A + Sync + Send, fold: F, combine: C) -> A
where
    A: Send,
    F: Fn(A, u64) -> A + Sync + Send,
    C: Fn(A, A) -> A + Sync + Send,
{
    let chunk = chunk.max(1);
    let chunks = len.div_ceil(chunk);
    let run = |c: u64| {
        let lo = c * chunk;
        let hi = (lo + chunk).min(len);
        (lo..hi).fold(init(), &fold)
    };
    match exec {
        Execution::Sequential => (0..chunks).map(run).fold(init(), &combine),
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..chunks).into_par_iter().map(run).reduce(&init, &combine),
    }
}

/// Configure the global worker pool size. Later calls are ignored.
pub fn set_workers(n: usize) {
    #[cfg(feature = "parallel")]
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = n;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let xs: Vec<u64> = (0..1000).collect();
        let seq = map(Execution::Sequential, &xs, |x| x * x);
        let def = map(Execution::default(), &xs, |x| x * x);
        assert_eq!(seq, def);
        let s1 = fold_range(Execution::Sequential, 12345, 100, || 0u64, |a, i| a + i, |a, b| a + b);
        let s2 = fold_range(Execution::default(), 12345, 100, || 0u64, |a, i| a + i, |a, b| a + b);
        assert_eq!(s1, 12345 * 12344 / 2);
        assert_eq!(s1, s2);
    }
}
