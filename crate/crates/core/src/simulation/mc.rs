//! Seeded Monte Carlo of the default model.
//!
//! Samples are grouped in fixed batches of [`BATCH_SIZE`]. Batch `b` draws
//! from a ChaCha8 stream selected by `(seed, b)`, so every sample's variates
//! depend only on the seed and the sample index. Batch sums are merged in
//! batch order, which makes the estimate independent of how batches are
//! scheduled across threads.

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::model::Portfolio;
use crate::special::inv_cdf_unchecked;
use crate::tranche::TrancheSpec;
use crate::{Error, Result};

/// Samples per batch (the unit of parallel work).
pub const BATCH_SIZE: u64 = 1 << 14;

/// A Monte Carlo estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McResult {
    /// Sample mean.
    pub estimate: f64,
    /// Sample standard deviation over `sqrt(samples)`.
    pub std_error: f64,
    /// Number of samples.
    pub samples: u64,
    /// Seed used.
    pub seed: u64,
}

/// Tranche estimates and the mean portfolio loss from one sample set.
#[derive(Debug, Clone, PartialEq)]
pub struct McEstimate {
    /// One entry per requested tranche, in order.
    pub tranches: Vec<McResult>,
    /// Estimate of `E[L]` on the same samples.
    pub mean_loss: McResult,
}

/// Running sums for one batch (or a merged prefix of batches).
#[derive(Debug, Clone, PartialEq)]
pub struct BatchSums {
    samples: u64,
    // tranche sums then the loss itself as the last entry
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
}

impl BatchSums {
    fn zero(k: usize) -> Self {
        BatchSums {
            samples: 0,
            sum: vec![0.0; k + 1],
            sum_sq: vec![0.0; k + 1],
        }
    }

    /// Adds another batch. Callers must merge in batch order.
    pub fn merge(&mut self, other: &BatchSums) {
        self.samples += other.samples;
        for (a, b) in self.sum.iter_mut().zip(&other.sum) {
            *a += b;
        }
        for (a, b) in self.sum_sq.iter_mut().zip(&other.sum_sq) {
            *a += b;
        }
    }

    fn result(&self, j: usize, seed: u64) -> McResult {
        let n = self.samples as f64;
        let mean = self.sum[j] / n;
        let var = if self.samples > 1 {
            ((self.sum_sq[j] - n * mean * mean) / (n - 1.0)).max(0.0)
        } else {
            0.0
        };
        McResult {
            estimate: mean,
            std_error: libm::sqrt(var / n),
            samples: self.samples,
            seed,
        }
    }
}

/// Pre-validated sampler for a portfolio and a set of tranches.
#[derive(Debug, Clone)]
pub struct McSampler<'a> {
    portfolio: &'a Portfolio,
    tranches: Vec<TrancheSpec>,
    samples: u64,
    seed: u64,
}

impl<'a> McSampler<'a> {
    /// Validates the inputs.
    pub fn new(portfolio: &'a Portfolio, tranches: &[TrancheSpec], samples: u64, seed: u64) -> Result<Self> {
        portfolio.ensure_valid()?;
        if samples == 0 {
            return Err(Error::Guard {
                what: "samples",
                value: 0,
                min: 1,
                max: usize::MAX,
            });
        }
        Ok(McSampler {
            portfolio,
            tranches: tranches.to_vec(),
            samples,
            seed,
        })
    }

    /// Number of batches covering all samples.
    pub fn batch_count(&self) -> u64 {
        self.samples.div_ceil(BATCH_SIZE)
    }

    /// Runs batch `batch` (a pure function of the seed and the index).
    pub fn run_batch(&self, batch: u64) -> BatchSums {
        let start = batch * BATCH_SIZE;
        let len = BATCH_SIZE.min(self.samples - start);
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(batch);
        let k = self.tranches.len();
        let mut sums = BatchSums::zero(k);
        sums.samples = len;
        let m = self.portfolio.factor_count();
        let mut factors = vec![0.0; m];
        for _ in 0..len {
            for f in factors.iter_mut() {
                *f = std_normal(&mut rng);
            }
            let mut loss = 0.0;
            for loan in self.portfolio.loans() {
                let eps = std_normal(&mut rng);
                let latent = loan.systematic(&factors) + loan.idiosyncratic_scale() * eps;
                if latent < loan.threshold_unchecked() {
                    loss += loan.lgd();
                }
            }
            for (j, t) in self.tranches.iter().enumerate() {
                let v = t.profile(loss);
                sums.sum[j] += v;
                sums.sum_sq[j] += v * v;
            }
            sums.sum[k] += loss;
            sums.sum_sq[k] += loss * loss;
        }
        sums
    }

    /// Turns merged sums into estimates.
    pub fn finish(&self, total: &BatchSums) -> McEstimate {
        let k = self.tranches.len();
        McEstimate {
            tranches: (0..k).map(|j| total.result(j, self.seed)).collect(),
            mean_loss: total.result(k, self.seed),
        }
    }

    /// Runs every batch on the current thread.
    pub fn run(&self) -> McEstimate {
        let mut total = BatchSums::zero(self.tranches.len());
        for b in 0..self.batch_count() {
            total.merge(&self.run_batch(b));
        }
        self.finish(&total)
    }
}

/// Uniform on the open interval `(0, 1)` from the top 53 bits.
#[inline]
fn open_uniform(rng: &mut ChaCha8Rng) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

#[inline]
fn std_normal(rng: &mut ChaCha8Rng) -> f64 {
    inv_cdf_unchecked(open_uniform(rng))
}

/// Monte Carlo estimate of the expected tranche loss.
pub fn mc_expected_tranche_loss(
    portfolio: &Portfolio,
    tranche: &TrancheSpec,
    samples: u64,
    seed: u64,
) -> Result<McResult> {
    Ok(
        McSampler::new(portfolio, core::slice::from_ref(tranche), samples, seed)?
            .run()
            .tranches[0],
    )
}

/// Several tranches and the mean loss on one sample set.
pub fn mc_expected_tranche_losses(
    portfolio: &Portfolio,
    tranches: &[TrancheSpec],
    samples: u64,
    seed: u64,
) -> Result<McEstimate> {
    Ok(McSampler::new(portfolio, tranches, samples, seed)?.run())
}
