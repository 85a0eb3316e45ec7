//! Deterministic parallel reduction.
//!
//! Work is split into fixed-size blocks; each block is summed sequentially in
//! index order and the block results are folded in index order. The result is
//! therefore bit-identical regardless of how many worker threads run, and the
//! `BALLBESOV_THREADS` environment variable only changes wall time.

use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;

const BLOCK: usize = 1024;

static POOL_INIT: OnceLock<()> = OnceLock::new();

/// Installs a global rayon pool sized from `BALLBESOV_THREADS` (first call
/// wins; later calls are no-ops).
pub fn init_thread_pool() {
    POOL_INIT.get_or_init(|| {
        if let Ok(v) = std::env::var("BALLBESOV_THREADS") {
            if let Ok(k) = v.trim().parse::<usize>() {
                if k >= 1 {
                    // Ignore failure: a pool may already be installed.
                    let _ = rayon::ThreadPoolBuilder::new()
                        .num_threads(k)
                        .build_global();
                }
            }
        }
    });
}

/// Sum of `f(i)` for `i in 0..len` with a fixed reduction order.
pub fn block_sum_complex(len: usize, f: impl Fn(usize) -> Complex64 + Sync) -> Complex64 {
    init_thread_pool();
    let blocks: Vec<Complex64> = (0..len.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| {
            let lo = b * BLOCK;
            let hi = (lo + BLOCK).min(len);
            let mut acc = Complex64::new(0.0, 0.0);
            for i in lo..hi {
                acc += f(i);
            }
            acc
        })
        .collect();
    blocks.into_iter().sum()
}

/// Real-valued variant of [`block_sum_complex`].
pub fn block_sum_f64(len: usize, f: impl Fn(usize) -> f64 + Sync) -> f64 {
    init_thread_pool();
    let blocks: Vec<f64> = (0..len.div_ceil(BLOCK))
        .into_par_iter()
        .map(|b| {
            let lo = b * BLOCK;
            let hi = (lo + BLOCK).min(len);
            let mut acc = 0.0;
            for i in lo..hi {
                acc += f(i);
            }
            acc
        })
        .collect();
    blocks.into_iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_sum_matches_sequential() {
        let n = 10_000;
        let f = |i: usize| (i as f64).sin() / (i as f64 + 1.0);
        let par = block_sum_f64(n, f);
        // sequential fold in the same block order
        let mut seq = 0.0;
        let mut blocks = Vec::new();
        for b in 0..n.div_ceil(1024) {
            let mut acc = 0.0;
            for i in b * 1024..((b + 1) * 1024).min(n) {
                acc += f(i);
            }
            blocks.push(acc);
        }
        for b in blocks {
            seq += b;
        }
        assert_eq!(par, seq, "reduction must be order-fixed, not just close");
    }
}
