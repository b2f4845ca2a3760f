//! Data-parallel map with a sequential fallback.
//!
//! With the `parallel` feature the default mode is rayon-backed; it can be
//! switched at run time, which is what the benches do.

use std::sync::atomic::{AtomicU8, Ordering};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

const UNSET: u8 = 0;
const SEQ: u8 = 1;
const PAR: u8 = 2;

static MODE: AtomicU8 = AtomicU8::new(UNSET);

pub fn set_mode(mode: Exec) {
    MODE.store(if mode == Exec::Parallel { PAR } else { SEQ }, Ordering::Relaxed);
}

pub fn mode() -> Exec {
    match MODE.load(Ordering::Relaxed) {
        SEQ => Exec::Sequential,
        PAR if cfg!(feature = "parallel") => Exec::Parallel,
        UNSET if cfg!(feature = "parallel") => Exec::Parallel,
        _ => Exec::Sequential,
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode() == Exec::Parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

/// Maps `f` over `0..n`, preserving order.
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    let idx: Vec<usize> = (0..n).collect();
    map(&idx, |&i| f(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree() {
        let xs: Vec<u64> = (0..100).collect();
        set_mode(Exec::Sequential);
        let a = map(&xs, |x| x * x);
        set_mode(Exec::Parallel);
        let b = map(&xs, |x| x * x);
        assert_eq!(a, b);
        assert_eq!(map_range(4, |i| i + 1), vec![1, 2, 3, 4]);
    }
}
