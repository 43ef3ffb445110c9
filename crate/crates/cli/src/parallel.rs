//! Multi-threaded Monte Carlo with results independent of the thread count.
//!
//! Batches are the unit of work. Workers pull batch indices from a shared
//! counter, and the per-batch sums are merged in batch order afterwards, so
//! the floating-point reduction never depends on scheduling.

use std::num::NonZeroUsize;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use std::thread;

use tranche_core::simulation::mc::{BatchSums, McEstimate, McSampler};
use tranche_core::{Portfolio, TrancheSpec};

use crate::error::{CliError, Result};

/// Environment variable capping worker threads; `0` or unset means one per
/// available core.
pub const THREADS_ENV: &str = "TRANCHE_KERNEL_THREADS";

/// Resolves a requested thread count, `0` meaning automatic.
pub fn resolve_threads(requested: usize) -> usize {
    if requested > 0 {
        requested
    } else {
        thread::available_parallelism().map_or(1, NonZeroUsize::get)
    }
}

/// Reads [`THREADS_ENV`]. Returns 0 (automatic) when unset.
pub fn threads_from_env() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(0),
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("{THREADS_ENV}='{s}' is not a non-negative integer"))),
    }
}

/// Runs `sampler` on up to `threads` workers (`0` = automatic).
pub fn run_sampler(sampler: &McSampler<'_>, threads: usize) -> McEstimate {
    let batches = sampler.batch_count();
    let workers = (resolve_threads(threads) as u64).min(batches).max(1);
    if workers == 1 {
        return sampler.run();
    }
    let next = AtomicU64::new(0);
    let slots: Mutex<Vec<Option<BatchSums>>> = Mutex::new(vec![None; batches as usize]);
    thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let b = next.fetch_add(1, Ordering::Relaxed);
                if b >= batches {
                    break;
                }
                let sums = sampler.run_batch(b);
                slots.lock().expect("worker panicked")[b as usize] = Some(sums);
            });
        }
    });
    let slots = slots.into_inner().expect("worker panicked");
    let mut iter = slots.into_iter().map(|s| s.expect("every batch ran"));
    let mut total = iter.next().expect("at least one batch");
    for sums in iter {
        total.merge(&sums);
    }
    sampler.finish(&total)
}

/// Threaded counterpart of `mc_expected_tranche_losses`; bit-identical to
/// it for every `threads`.
pub fn mc_tranche_losses(
    portfolio: &Portfolio,
    tranches: &[TrancheSpec],
    samples: u64,
    seed: u64,
    threads: usize,
) -> Result<McEstimate> {
    let sampler = McSampler::new(portfolio, tranches, samples, seed)?;
    Ok(run_sampler(&sampler, threads))
}
