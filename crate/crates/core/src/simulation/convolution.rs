//! Conditional loss distribution on a grid by recursive convolution.
//!
//! Each loss given default is rounded to a multiple of `grid_step` (ties to
//! even), after which the Bernoulli losses convolve exactly. The rounding
//! moves the total loss by at most `n * grid_step / 2`, which is reported.

use alloc::vec;
use alloc::vec::Vec;

use crate::model::Portfolio;
use crate::quadrature::QuadratureRule;
use crate::tranche::TrancheSpec;
use crate::{Error, Result};

/// Largest number of grid buckets.
pub const MAX_GRID_BUCKETS: usize = 10_000_000;

/// Probabilities on the grid `0, step, 2 step, ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct LossDistribution {
    step: f64,
    probs: Vec<f64>,
    // mass beyond the last bucket, only for capped distributions
    overflow: f64,
    rounding_bound: f64,
}

impl LossDistribution {
    /// Grid spacing.
    pub fn step(&self) -> f64 {
        self.step
    }

    /// `probs()[j]` is the probability of loss `j * step`.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Upper bound on `|L_grid - L|` from rounding, `n * step / 2`.
    pub fn rounding_bound(&self) -> f64 {
        self.rounding_bound
    }

    /// Total probability (including any capped mass).
    pub fn total_mass(&self) -> f64 {
        self.probs.iter().sum::<f64>() + self.overflow
    }

    /// Mean loss on the grid. Only meaningful for uncapped distributions.
    pub fn mean(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(j, p)| p * j as f64 * self.step)
            .sum()
    }

    /// `E[Tl_{a,b}(L_grid)]`. Capped mass counts as a full tranche loss.
    pub fn expected_profile(&self, t: &TrancheSpec) -> f64 {
        let body: f64 = self
            .probs
            .iter()
            .enumerate()
            .map(|(j, p)| p * t.profile(j as f64 * self.step))
            .sum();
        body + self.overflow
    }
}

fn grid_units(portfolio: &Portfolio, step: f64) -> Result<Vec<usize>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Domain {
            what: "grid_step",
            value: step,
        });
    }
    portfolio
        .loans()
        .iter()
        .map(|l| {
            let u = libm::rint(l.lgd() / step);
            if u > MAX_GRID_BUCKETS as f64 {
                Err(Error::Guard {
                    what: "grid buckets",
                    value: usize::MAX,
                    min: 1,
                    max: MAX_GRID_BUCKETS,
                })
            } else {
                Ok(u as usize)
            }
        })
        .collect()
}

fn convolve(
    portfolio: &Portfolio,
    factors: &[f64],
    units: &[usize],
    buckets: usize,
    capped: bool,
    step: f64,
) -> LossDistribution {
    let mut probs = vec![0.0; buckets];
    probs[0] = 1.0;
    let mut overflow = 0.0;
    // highest reachable bucket so far
    let mut top = 0usize;
    for (loan, &u) in portfolio.loans().iter().zip(units) {
        let q = loan.conditional_default_prob(factors);
        let stay = 1.0 - q;
        if u == 0 {
            continue;
        }
        if capped {
            // defaults pushing mass past the last bucket move it to overflow
            let first_spilled = buckets.saturating_sub(u);
            if first_spilled <= top {
                overflow += q * probs[first_spilled..=top].iter().sum::<f64>();
            }
        }
        let new_top = (top + u).min(buckets - 1);
        for j in (0..=new_top).rev() {
            let from = if j >= u { probs[j - u] } else { 0.0 };
            probs[j] = probs[j] * stay + q * from;
        }
        top = new_top;
    }
    LossDistribution {
        step,
        probs,
        overflow,
        rounding_bound: portfolio.len() as f64 * step / 2.0,
    }
}

/// Full conditional loss distribution at `factors` on a grid of `grid_step`.
pub fn exact_conditional_distribution_convolution(
    portfolio: &Portfolio,
    factors: &[f64],
    grid_step: f64,
) -> Result<LossDistribution> {
    portfolio.ensure_valid()?;
    portfolio.check_factors(factors.len())?;
    let units = grid_units(portfolio, grid_step)?;
    let buckets = units.iter().sum::<usize>() + 1;
    if buckets > MAX_GRID_BUCKETS {
        return Err(Error::Guard {
            what: "grid buckets",
            value: buckets,
            min: 1,
            max: MAX_GRID_BUCKETS,
        });
    }
    Ok(convolve(portfolio, factors, &units, buckets, false, grid_step))
}

/// Tranche value on the rounded grid, with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvolutionPrice {
    /// Expected tranche loss.
    pub value: f64,
    /// Bound on the rounding error of `value`, `n step / (2 (b - a))`.
    pub error_bound: f64,
}

/// `E[Tl_{a,b}(L)]` from grid convolution at each quadrature node.
///
/// The grid is truncated just above the detachment point; mass beyond it
/// contributes a full tranche loss.
pub fn exact_tranche_loss_convolution(
    portfolio: &Portfolio,
    tranche: &TrancheSpec,
    rule: &QuadratureRule,
    grid_step: f64,
) -> Result<ConvolutionPrice> {
    portfolio.ensure_valid()?;
    portfolio.check_factors(rule.dim())?;
    let units = grid_units(portfolio, grid_step)?;
    let full = units.iter().sum::<usize>() + 1;
    // every bucket at or above detach has profile 1
    let cap = libm::ceil(tranche.detach() / grid_step) as usize + 1;
    let (buckets, capped) = if cap < full { (cap, true) } else { (full, false) };
    if buckets > MAX_GRID_BUCKETS {
        return Err(Error::Guard {
            what: "grid buckets",
            value: buckets,
            min: 1,
            max: MAX_GRID_BUCKETS,
        });
    }
    let value =
        rule.integrate(|x| convolve(portfolio, x, &units, buckets, capped, grid_step).expected_profile(tranche));
    Ok(ConvolutionPrice {
        value,
        error_bound: portfolio.len() as f64 * grid_step / (2.0 * tranche.width()),
    })
}
