//! Analytic conditional moments of the portfolio loss.
//!
//! Given the factors, the loss is `sum_i v_i I_i` with independent
//! `I_i ~ Bernoulli(q_i)`. Cumulants add over independent summands, so the
//! portfolio cumulants are sums of per-loan cumulants; central moments follow
//! from the cumulant recursion
//!
//! ```text
//! mu_n = sum_{k=2}^{n} C(n-1, k-1) kappa_k mu_{n-k},   mu_0 = 1, mu_1 = 0.
//! ```
//!
//! Per-loan cumulants are derived from the two-point central moments
//! `p (v q)^j + q (-v p)^j` rather than from raw moments, which avoids the
//! cancellation `v^2 p - (v p)^2` when `p` is close to one.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::guard;
use crate::model::{bernoulli_variance, FactorDraw, Portfolio};
use crate::Result;

/// Highest moment/cumulant order supported by the recursions.
pub const MAX_MOMENT_ORDER: usize = 16;

const BINOM: [[f64; MAX_MOMENT_ORDER + 1]; MAX_MOMENT_ORDER + 1] = binomial_table();

const fn binomial_table() -> [[f64; MAX_MOMENT_ORDER + 1]; MAX_MOMENT_ORDER + 1] {
    let mut t = [[0.0; MAX_MOMENT_ORDER + 1]; MAX_MOMENT_ORDER + 1];
    let mut ints = [[0u64; MAX_MOMENT_ORDER + 1]; MAX_MOMENT_ORDER + 1];
    let mut n = 0;
    while n <= MAX_MOMENT_ORDER {
        ints[n][0] = 1;
        let mut k = 1;
        while k <= n {
            ints[n][k] = ints[n - 1][k - 1] + if k < n { ints[n - 1][k] } else { 0 };
            k += 1;
        }
        let mut k = 0;
        while k <= n {
            t[n][k] = ints[n][k] as f64;
            k += 1;
        }
        n += 1;
    }
    t
}

/// Exact binomial coefficient for `n <= 16`.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        0.0
    } else {
        BINOM[n][k]
    }
}

/// Moments of the conditional loss at one factor scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalMoments {
    /// `E[L | phi]`.
    pub mean: f64,
    /// `Var[L | phi]`; always equal to `central[2]`.
    pub variance: f64,
    /// `central[j] = E[(L - mean)^j | phi]` for `j = 0..=order`
    /// (`central[0] = 1`, `central[1] = 0`).
    pub central: Vec<f64>,
}

impl ConditionalMoments {
    /// Highest available order.
    pub fn order(&self) -> usize {
        self.central.len() - 1
    }

    /// Zero variance: the conditional loss is a constant.
    pub fn is_degenerate(&self) -> bool {
        !(self.variance > 0.0)
    }
}

/// Cumulants `kappa_0..kappa_order` of `v * Bernoulli(p)`, indexed by order
/// (`kappa_0 = 0`).
pub fn scaled_bernoulli_cumulants(v: f64, p: f64, order: usize) -> Result<Vec<f64>> {
    guard("cumulant order", order, 1, MAX_MOMENT_ORDER)?;
    let mut out = vec![0.0; order + 1];
    add_loan_cumulants(v, p, &mut out);
    Ok(out)
}

/// Adds the cumulants of `v * Bernoulli(p)` of orders `1..acc.len()` into
/// `acc`. `acc.len()` must not exceed `MAX_MOMENT_ORDER + 1`.
#[inline]
pub(crate) fn add_loan_cumulants(v: f64, p: f64, acc: &mut [f64]) {
    let order = acc.len() - 1;
    if order >= 1 {
        acc[1] += v * p;
    }
    if order < 2 {
        return;
    }
    let q = 1.0 - p;
    let up = v * q;
    let down = -v * p;
    // central moments of the two-point law
    let mut mu = [0.0; MAX_MOMENT_ORDER + 1];
    mu[0] = 1.0;
    mu[2] = bernoulli_variance(v, p);
    let (mut up_pow, mut down_pow) = (up * up, down * down);
    for j in 3..=order {
        up_pow *= up;
        down_pow *= down;
        mu[j] = p * up_pow + q * down_pow;
    }
    let mut kappa = [0.0; MAX_MOMENT_ORDER + 1];
    for n in 2..=order {
        let mut k_n = mu[n];
        for k in 2..n.saturating_sub(1) {
            k_n -= BINOM[n - 1][k - 1] * kappa[k] * mu[n - k];
        }
        kappa[n] = k_n;
        acc[n] += k_n;
    }
}

/// Central moments `mu_0..mu_order` from cumulants indexed by order
/// (`kappa[1]` is ignored).
pub fn central_moments_from_cumulants(kappa: &[f64]) -> Vec<f64> {
    let order = kappa.len() - 1;
    let mut mu = vec![0.0; order + 1];
    mu[0] = 1.0;
    if order >= 2 {
        // exact: the variance is the second cumulant
        mu[2] = kappa[2];
    }
    for n in 3..=order {
        let mut s = 0.0;
        for k in 2..=n {
            s += BINOM[n - 1][k - 1] * kappa[k] * mu[n - k];
        }
        mu[n] = s;
    }
    mu
}

/// Conditional mean and central moments up to `order` of the portfolio loss
/// at `factors`.
pub fn conditional_central_moments(
    portfolio: &Portfolio,
    factors: &FactorDraw,
    order: usize,
) -> Result<ConditionalMoments> {
    portfolio.ensure_valid()?;
    portfolio.check_factors(factors.len())?;
    guard("moment order", order, 2, MAX_MOMENT_ORDER)?;
    let mut kappa = [0.0; MAX_MOMENT_ORDER + 1];
    let kappa = &mut kappa[..=order];
    for loan in portfolio.loans() {
        let q = loan.conditional_default_prob(factors.as_slice());
        add_loan_cumulants(loan.lgd(), q, kappa);
    }
    Ok(moments_from_summed_cumulants(kappa))
}

pub(crate) fn moments_from_summed_cumulants(kappa: &[f64]) -> ConditionalMoments {
    let central = central_moments_from_cumulants(kappa);
    ConditionalMoments {
        mean: kappa[1],
        variance: central[2],
        central,
    }
}
