//! The standard heterogeneous single-factor test portfolio.
//!
//! For `i = 1..n`, with `s = (i - 1) / (n - 1)`:
//! `f_i = 1/n`, `p_i = 0.015 + 0.05 s`, `r_i = 0.5 - 0.1 s`, `w_i1 = 0.5 - 0.1 s`.

use alloc::vec;
use alloc::vec::Vec;

use crate::model::{Loan, Portfolio};
use crate::{Error, Result};

/// Builds the `n`-name test portfolio. Requires `n >= 2`.
pub fn synth_portfolio(n: usize) -> Result<Portfolio> {
    if n < 2 {
        return Err(Error::Guard {
            what: "synth portfolio size",
            value: n,
            min: 2,
            max: usize::MAX,
        });
    }
    let denom = (n - 1) as f64;
    let loans: Vec<Loan> = (0..n)
        .map(|k| {
            let s = k as f64 / denom;
            Loan::new(1.0 / n as f64, 0.015 + 0.05 * s, 0.5 - 0.1 * s, vec![0.5 - 0.1 * s])
        })
        .collect();
    Ok(Portfolio::new(loans, 1))
}
