//! Tranche loss profile and its expectation under a truncated expansion.
//!
//! The profile is a call spread on the loss,
//! `Tl_{a,b}(x) = ((x - a)^+ - (x - b)^+) / (b - a)`, so its expectation is
//! `(C(a) - C(b)) / (b - a)` with the stop-loss transform `C(K) = E[(L - K)^+]`.
//!
//! Under `rho(x) = (1/s) sum c_n He_n(z) phi(z)` and `k = (K - m) / s`,
//! using `int_k^inf He_n phi = He_{n-1}(k) phi(k)` and
//! `z He_n = He_{n+1} + n He_{n-1}`:
//!
//! ```text
//! C(K) = s [ c_0 (phi(k) - k Q(k)) + c_1 Q(k) + sum_{n>=2} c_n He_{n-2}(k) phi(k) ]
//! ```
//!
//! where `Q = 1 - Phi`.

use crate::expansion::{GCExpansion, MAX_TRUNCATION_ORDER};
use crate::special::{hermite, hermite_table, std_normal_pdf, std_normal_sf};
use crate::{Error, Result};

/// A tranche `[attach, detach]` of the portfolio loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrancheSpec {
    attach: f64,
    detach: f64,
}

impl TrancheSpec {
    /// Requires `0 <= attach < detach <= 1`.
    pub fn new(attach: f64, detach: f64) -> Result<Self> {
        if attach >= 0.0 && attach < detach && detach <= 1.0 {
            Ok(TrancheSpec { attach, detach })
        } else {
            Err(Error::InvalidTranche { attach, detach })
        }
    }

    /// Equity tranche `[0, detach]`.
    pub fn equity(detach: f64) -> Result<Self> {
        Self::new(0.0, detach)
    }

    /// Attachment point `a`.
    pub fn attach(&self) -> f64 {
        self.attach
    }

    /// Detachment point `b`.
    pub fn detach(&self) -> f64 {
        self.detach
    }

    /// `b - a`.
    pub fn width(&self) -> f64 {
        self.detach - self.attach
    }

    /// Fraction of the tranche lost when the portfolio loses `x`.
    #[inline]
    pub fn profile(&self, x: f64) -> f64 {
        (x - self.attach).max(0.0).min(self.width()) / self.width()
    }
}

/// Free-function form of [`TrancheSpec::profile`].
pub fn tranche_profile(t: &TrancheSpec, x: f64) -> f64 {
    t.profile(x)
}

/// `int_k^inf He_n(z) phi(z) dz`.
pub fn hermite_tail_integral(n: usize, k: f64) -> f64 {
    if n == 0 {
        std_normal_sf(k)
    } else {
        let pdf = std_normal_pdf(k);
        if pdf == 0.0 {
            0.0
        } else {
            hermite(n - 1, k) * pdf
        }
    }
}

/// Stop-loss transform `E[(L - strike)^+]` under the truncated density.
pub fn stop_loss(exp: &GCExpansion, strike: f64) -> f64 {
    let s = exp.std();
    let k = (strike - exp.mean()) / s;
    let c = exp.coeffs();
    let pdf = std_normal_pdf(k);
    let sf = std_normal_sf(k);
    let mut total = c[0] * (pdf - k * sf);
    if c.len() > 1 {
        total += c[1] * sf;
    }
    // He_{n-2}(k) phi(k) terms; skipped where phi underflows so the
    // polynomial cannot turn 0 * inf into NaN
    if c.len() > 2 && pdf > 0.0 {
        let mut h = [0.0; MAX_TRUNCATION_ORDER + 1];
        let h = &mut h[..c.len() - 2];
        hermite_table(k, h);
        let tail: f64 = c[2..].iter().zip(h.iter()).map(|(cn, he)| cn * he).sum();
        total += tail * pdf;
    }
    s * total
}

/// Expected tranche loss fraction conditional on the expansion's scenario.
///
/// Returned unclamped: an oscillating density can push it slightly outside
/// `[0, 1]`.
pub fn conditional_tranche_loss(exp: &GCExpansion, t: &TrancheSpec) -> f64 {
    (stop_loss(exp, t.attach) - stop_loss(exp, t.detach)) / t.width()
}
