//! Expected tranche loss: analytic inner integral, quadrature over factors.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::guard;
use crate::expansion::{GCExpansion, MAX_TRUNCATION_ORDER};
use crate::model::Portfolio;
use crate::moments::{add_loan_cumulants, moments_from_summed_cumulants, MAX_MOMENT_ORDER};
use crate::quadrature::QuadratureRule;
use crate::tranche::{conditional_tranche_loss, TrancheSpec};
use crate::{Error, Result};

/// How a price was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Gram-Charlier expansion of order `N`.
    Hermite,
    /// Normal approximation (`N = 1`).
    Normal,
    /// Monte Carlo.
    Mc,
    /// Exact conditional distribution (enumeration or convolution).
    Exact,
}

impl Method {
    /// Lower-case name used on the command line and in output files.
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Hermite => "hermite",
            Method::Normal => "normal",
            Method::Mc => "mc",
            Method::Exact => "exact",
        }
    }

    /// Parses [`as_str`](Self::as_str) names.
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "hermite" => Some(Method::Hermite),
            "normal" => Some(Method::Normal),
            "mc" => Some(Method::Mc),
            "exact" => Some(Method::Exact),
            _ => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An expected tranche loss.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceResult {
    /// Expected tranche loss as a fraction of tranche notional.
    pub value: f64,
    /// Producing method.
    pub method: Method,
    /// Truncation order, for expansion methods.
    pub order_n: Option<usize>,
    /// Per-axis quadrature order.
    pub quad_order: usize,
    /// Whether the value was clamped to `[0, 1]`.
    pub clamped: bool,
    /// Factor scenarios evaluated.
    pub nodes_evaluated: usize,
}

/// Expected loss of `tranche` under the order-`order` expansion, integrated
/// over the factors with `rule`.
pub fn expected_tranche_loss(
    portfolio: &Portfolio,
    tranche: &TrancheSpec,
    order: usize,
    rule: &QuadratureRule,
    clamp: bool,
) -> Result<PriceResult> {
    let mut out = expected_tranche_losses(portfolio, core::slice::from_ref(tranche), order, rule, clamp)?;
    Ok(out.remove(0))
}

/// Several tranches in one pass over the nodes. Conditional probabilities
/// and expansions are computed once per node and shared by all tranches.
pub fn expected_tranche_losses(
    portfolio: &Portfolio,
    tranches: &[TrancheSpec],
    order: usize,
    rule: &QuadratureRule,
    clamp: bool,
) -> Result<Vec<PriceResult>> {
    portfolio.ensure_valid()?;
    portfolio.check_factors(rule.dim())?;
    guard("truncation order", order, 1, MAX_TRUNCATION_ORDER)?;
    let mut sums = vec![0.0; tranches.len()];
    let mut nodes = 0usize;
    let mut node_values = vec![0.0; tranches.len()];
    for (x, w) in rule.iter() {
        conditional_tranche_losses(portfolio, x, order, tranches, &mut node_values)?;
        for (s, v) in sums.iter_mut().zip(&node_values) {
            *s += w * v;
        }
        nodes += 1;
    }
    Ok(sums
        .into_iter()
        .map(|v| PriceResult {
            value: if clamp { v.clamp(0.0, 1.0) } else { v },
            method: Method::Hermite,
            order_n: Some(order),
            quad_order: rule.order(),
            clamped: clamp,
            nodes_evaluated: nodes,
        })
        .collect())
}

/// Conditional expected losses of every tranche at one factor scenario.
///
/// Deterministic scenarios (zero conditional variance, or moments that
/// overflow when standardized) contribute the tranche profile at the mean.
pub fn conditional_tranche_losses(
    portfolio: &Portfolio,
    factors: &[f64],
    order: usize,
    tranches: &[TrancheSpec],
    out: &mut [f64],
) -> Result<()> {
    let moment_order = order.max(2);
    debug_assert!(moment_order <= MAX_MOMENT_ORDER);
    let mut kappa = [0.0; MAX_MOMENT_ORDER + 1];
    let kappa = &mut kappa[..=moment_order];
    for loan in portfolio.loans() {
        let q = loan.conditional_default_prob(factors);
        add_loan_cumulants(loan.lgd(), q, kappa);
    }
    let moments = moments_from_summed_cumulants(kappa);
    match GCExpansion::from_moments(&moments, order) {
        Ok(exp) => {
            for (o, t) in out.iter_mut().zip(tranches) {
                *o = conditional_tranche_loss(&exp, t);
            }
            Ok(())
        }
        Err(Error::Degenerate) => {
            for (o, t) in out.iter_mut().zip(tranches) {
                *o = t.profile(moments.mean);
            }
            Ok(())
        }
        Err(e) => Err(e),
    }
}

/// The normal approximation: [`expected_tranche_loss`] with `N = 1`.
pub fn normal_approx_tranche_loss(
    portfolio: &Portfolio,
    tranche: &TrancheSpec,
    rule: &QuadratureRule,
) -> Result<PriceResult> {
    let mut r = expected_tranche_loss(portfolio, tranche, 1, rule, false)?;
    r.method = Method::Normal;
    Ok(r)
}

/// `E[L] = sum_i f_i (1 - r_i) p_i`.
pub fn expected_portfolio_loss(portfolio: &Portfolio) -> Result<f64> {
    portfolio.ensure_valid()?;
    Ok(portfolio.loans().iter().map(|l| l.lgd() * l.default_prob()).sum())
}
