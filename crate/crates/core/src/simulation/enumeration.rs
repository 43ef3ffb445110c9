//! Exact conditional expectation by enumerating all `2^n` default patterns.
//!
//! The loans are split into a low and a high half. Pattern probabilities and
//! losses are tabulated per half by direct products, and a full pattern is
//! `low[mask_lo] * high[mask_hi]`. Every probability is a product of at most
//! `n` factors, so there is no drift across the enumeration and zero
//! conditional probabilities are handled without logarithms.

use alloc::vec::Vec;

use crate::error::guard;
use crate::model::Portfolio;
use crate::quadrature::QuadratureRule;
use crate::tranche::TrancheSpec;
use crate::Result;

/// Largest portfolio accepted by the enumeration oracle.
pub const MAX_ENUMERATION_LOANS: usize = 20;

fn half_table(lgd: &[f64], q: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let size = 1usize << lgd.len();
    let mut prob = Vec::with_capacity(size);
    let mut loss = Vec::with_capacity(size);
    prob.push(1.0);
    loss.push(0.0);
    // doubling: pattern with bit i set extends the first 2^i entries
    for i in 0..lgd.len() {
        let len = prob.len();
        for j in 0..len {
            let (p, l) = (prob[j], loss[j]);
            prob.push(p * q[i]);
            loss.push(l + lgd[i]);
            prob[j] = p * (1.0 - q[i]);
        }
    }
    (prob, loss)
}

/// Calls `visit(loss, probability)` for every default pattern conditional on
/// `factors`.
pub fn for_each_pattern<F: FnMut(f64, f64)>(portfolio: &Portfolio, factors: &[f64], mut visit: F) -> Result<()> {
    portfolio.ensure_valid()?;
    portfolio.check_factors(factors.len())?;
    guard("enumeration loans", portfolio.len(), 1, MAX_ENUMERATION_LOANS)?;
    let lgd: Vec<f64> = portfolio.loans().iter().map(|l| l.lgd()).collect();
    let q: Vec<f64> = portfolio
        .loans()
        .iter()
        .map(|l| l.conditional_default_prob(factors))
        .collect();
    let split = lgd.len() / 2;
    let (lo_p, lo_l) = half_table(&lgd[..split], &q[..split]);
    let (hi_p, hi_l) = half_table(&lgd[split..], &q[split..]);
    for (hp, hl) in hi_p.iter().zip(&hi_l) {
        for (lp, ll) in lo_p.iter().zip(&lo_l) {
            visit(ll + hl, lp * hp);
        }
    }
    Ok(())
}

/// `E[Tl_{a,b}(L)]` with the conditional law enumerated exactly at each node.
pub fn exact_tranche_loss_enumeration(
    portfolio: &Portfolio,
    tranche: &TrancheSpec,
    rule: &QuadratureRule,
) -> Result<f64> {
    Ok(exact_tranche_losses_enumeration(portfolio, core::slice::from_ref(tranche), rule)?[0])
}

/// [`exact_tranche_loss_enumeration`] for several tranches at once.
pub fn exact_tranche_losses_enumeration(
    portfolio: &Portfolio,
    tranches: &[TrancheSpec],
    rule: &QuadratureRule,
) -> Result<Vec<f64>> {
    portfolio.check_factors(rule.dim())?;
    let mut totals = alloc::vec![0.0; tranches.len()];
    let mut node_vals = alloc::vec![0.0; tranches.len()];
    for (x, w) in rule.iter() {
        node_vals.iter_mut().for_each(|v| *v = 0.0);
        for_each_pattern(portfolio, x, |loss, prob| {
            for (v, t) in node_vals.iter_mut().zip(tranches) {
                *v += prob * t.profile(loss);
            }
        })?;
        for (t, v) in totals.iter_mut().zip(&node_vals) {
            *t += w * v;
        }
    }
    Ok(totals)
}
