//! Portfolio data model and the conditional (factor-fixed) default quantities.
//!
//! Loan `i` defaults when `sum_k w_ik phi_k + sqrt(1 - |w_i|^2) eps_i < Phi^-1(p_i)`
//! with independent standard normal systematic factors `phi_k` and
//! idiosyncratic `eps_i`. Given the factors, defaults are independent with
//! probability
//!
//! ```text
//! p_i(phi) = Phi((Phi^-1(p_i) - sum_k w_ik phi_k) / sqrt(1 - |w_i|^2))
//! ```

use alloc::vec::Vec;
use core::fmt;

use crate::special::{inv_cdf_unchecked, std_normal_cdf};
use crate::{Error, Result};

/// Largest accepted squared loading norm.
pub const MAX_LOADING_NORM_SQ: f64 = 1.0 - 1e-9;

/// Slack on `sum f_i <= 1`.
pub const NOTIONAL_SUM_EPS: f64 = 1e-12;

/// One obligor.
#[derive(Debug, Clone, PartialEq)]
pub struct Loan {
    notional_fraction: f64,
    default_prob: f64,
    recovery: f64,
    loadings: Vec<f64>,
    // factor-independent, computed once
    threshold: f64,
    idio_scale: f64,
}

impl Loan {
    /// Builds a loan without validating it; see [`Portfolio::validate`].
    pub fn new(notional_fraction: f64, default_prob: f64, recovery: f64, loadings: Vec<f64>) -> Self {
        let threshold = if default_prob > 0.0 && default_prob < 1.0 {
            inv_cdf_unchecked(default_prob)
        } else {
            f64::NAN
        };
        let norm_sq: f64 = loadings.iter().map(|w| w * w).sum();
        let idio_scale = libm::sqrt(1.0 - norm_sq);
        Loan {
            notional_fraction,
            default_prob,
            recovery,
            loadings,
            threshold,
            idio_scale,
        }
    }

    /// Fraction of total portfolio notional, `f_i`.
    pub fn notional_fraction(&self) -> f64 {
        self.notional_fraction
    }

    /// Unconditional default probability, `p_i`.
    pub fn default_prob(&self) -> f64 {
        self.default_prob
    }

    /// Recovery rate, `r_i`.
    pub fn recovery(&self) -> f64 {
        self.recovery
    }

    /// Factor loadings `w_i1..w_im`.
    pub fn loadings(&self) -> &[f64] {
        &self.loadings
    }

    /// Loss given default as a fraction of portfolio notional, `f_i (1 - r_i)`.
    pub fn lgd(&self) -> f64 {
        self.notional_fraction * (1.0 - self.recovery)
    }

    /// `Phi^-1(p_i)`; the latent threshold below which the loan defaults.
    pub fn default_threshold(&self) -> Result<f64> {
        if self.threshold.is_nan() {
            Err(Error::Domain {
                what: "default_prob",
                value: self.default_prob,
            })
        } else {
            Ok(self.threshold)
        }
    }

    pub(crate) fn threshold_unchecked(&self) -> f64 {
        self.threshold
    }

    /// `sqrt(1 - sum_k w_ik^2)`, the weight on the idiosyncratic shock.
    pub fn idiosyncratic_scale(&self) -> f64 {
        self.idio_scale
    }

    /// Systematic part of the latent variable, `sum_k w_ik phi_k`.
    #[inline]
    pub fn systematic(&self, factors: &[f64]) -> f64 {
        self.loadings.iter().zip(factors).map(|(w, phi)| w * phi).sum()
    }

    /// Default probability conditional on the systematic factors.
    ///
    /// The loan must be valid and `factors` must have the portfolio's
    /// dimension.
    #[inline]
    pub fn conditional_default_prob(&self, factors: &[f64]) -> f64 {
        std_normal_cdf((self.threshold - self.systematic(factors)) / self.idio_scale)
    }

    fn violations(&self, index: usize, factor_count: usize, out: &mut Vec<Violation>) {
        let mut push = |kind| {
            out.push(Violation {
                loan: Some(index),
                kind,
            })
        };
        let f = self.notional_fraction;
        if !(f > 0.0 && f <= 1.0) {
            push(ViolationKind::NotionalOutOfRange(f));
        }
        let p = self.default_prob;
        if !(p > 0.0 && p < 1.0) {
            push(ViolationKind::DefaultProbOutOfRange(p));
        }
        let r = self.recovery;
        if !(0.0..1.0).contains(&r) {
            push(ViolationKind::RecoveryOutOfRange(r));
        }
        if self.loadings.len() != factor_count {
            push(ViolationKind::LoadingsLength {
                expected: factor_count,
                found: self.loadings.len(),
            });
        }
        let norm_sq: f64 = self.loadings.iter().map(|w| w * w).sum();
        if !(norm_sq <= MAX_LOADING_NORM_SQ) {
            push(ViolationKind::LoadingsNorm(norm_sq));
        }
    }
}

/// What went wrong with a portfolio.
#[derive(Debug, Clone, PartialEq)]
pub enum ViolationKind {
    /// `f` not in `(0, 1]`.
    NotionalOutOfRange(f64),
    /// `p` not in `(0, 1)`.
    DefaultProbOutOfRange(f64),
    /// `r` not in `[0, 1)`.
    RecoveryOutOfRange(f64),
    /// Loadings vector length differs from the factor count.
    LoadingsLength {
        /// Portfolio factor count.
        expected: usize,
        /// Loan's loadings length.
        found: usize,
    },
    /// Squared loading norm too close to (or above) one.
    LoadingsNorm(f64),
    /// Notional fractions sum above one.
    NotionalSum(f64),
    /// Factor count is zero.
    NoFactors,
    /// Portfolio holds no loans.
    Empty,
}

/// One violated invariant, optionally tied to a loan (0-based index).
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    /// Offending loan, if the violation is per-loan.
    pub loan: Option<usize>,
    /// The violated invariant.
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(i) = self.loan {
            write!(f, "loan {i}: ")?;
        }
        match &self.kind {
            ViolationKind::NotionalOutOfRange(v) => write!(f, "notional_fraction out of range ({v})"),
            ViolationKind::DefaultProbOutOfRange(v) => write!(f, "default_prob out of range ({v})"),
            ViolationKind::RecoveryOutOfRange(v) => write!(f, "recovery out of range ({v})"),
            ViolationKind::LoadingsLength { expected, found } => {
                write!(f, "loadings length {found} != factor_count {expected}")
            }
            ViolationKind::LoadingsNorm(v) => write!(f, "loadings norm \u{2265} 1 (sum of squares {v})"),
            ViolationKind::NotionalSum(v) => write!(f, "notional fractions sum to {v} > 1"),
            ViolationKind::NoFactors => f.write_str("factor_count must be positive"),
            ViolationKind::Empty => f.write_str("portfolio has no loans"),
        }
    }
}

/// Ordered loans sharing `factor_count` systematic factors.
#[derive(Debug, Clone, PartialEq)]
pub struct Portfolio {
    loans: Vec<Loan>,
    factor_count: usize,
}

impl Portfolio {
    /// Builds a portfolio without validating it.
    pub fn new(loans: Vec<Loan>, factor_count: usize) -> Self {
        Portfolio { loans, factor_count }
    }

    /// Builds and validates in one step.
    pub fn try_new(loans: Vec<Loan>, factor_count: usize) -> Result<Self> {
        let p = Self::new(loans, factor_count);
        p.ensure_valid()?;
        Ok(p)
    }

    /// The loans, in order.
    pub fn loans(&self) -> &[Loan] {
        &self.loans
    }

    /// Number of systematic factors, `m`.
    pub fn factor_count(&self) -> usize {
        self.factor_count
    }

    /// Number of loans, `n`.
    pub fn len(&self) -> usize {
        self.loans.len()
    }

    /// True when there are no loans.
    pub fn is_empty(&self) -> bool {
        self.loans.is_empty()
    }

    /// Every violated invariant; empty means valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.factor_count == 0 {
            out.push(Violation {
                loan: None,
                kind: ViolationKind::NoFactors,
            });
        }
        if self.loans.is_empty() {
            out.push(Violation {
                loan: None,
                kind: ViolationKind::Empty,
            });
        }
        for (i, loan) in self.loans.iter().enumerate() {
            loan.violations(i, self.factor_count, &mut out);
        }
        let total: f64 = self.loans.iter().map(|l| l.notional_fraction).sum();
        if total > 1.0 + NOTIONAL_SUM_EPS {
            out.push(Violation {
                loan: None,
                kind: ViolationKind::NotionalSum(total),
            });
        }
        out
    }

    /// `Ok` when [`validate`](Self::validate) finds nothing.
    pub fn ensure_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidPortfolio(v))
        }
    }

    pub(crate) fn check_factors(&self, found: usize) -> Result<()> {
        if found == self.factor_count {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.factor_count,
                found,
            })
        }
    }

    /// Conditional default probabilities of every loan at `factors`.
    pub fn conditional_default_probs(&self, factors: &[f64], out: &mut Vec<f64>) {
        out.clear();
        out.extend(self.loans.iter().map(|l| l.conditional_default_prob(factors)));
    }

    /// Conditional mean `sum lgd_i p_i(phi)` and variance
    /// `sum lgd_i^2 p_i(phi)(1 - p_i(phi))` of the portfolio loss.
    pub fn conditional_mean_variance(&self, factors: &FactorDraw) -> Result<(f64, f64)> {
        self.ensure_valid()?;
        self.check_factors(factors.len())?;
        let mut mean = 0.0;
        let mut variance = 0.0;
        for loan in &self.loans {
            let q = loan.conditional_default_prob(factors.as_slice());
            let v = loan.lgd();
            mean += v * q;
            variance += bernoulli_variance(v, q);
        }
        Ok((mean, variance))
    }

    /// Concatenates two portfolios over the same factors.
    pub fn concat(&self, other: &Portfolio) -> Result<Portfolio> {
        self.check_factors(other.factor_count)?;
        let mut loans = self.loans.clone();
        loans.extend(other.loans.iter().cloned());
        Ok(Portfolio::new(loans, self.factor_count))
    }
}

/// Variance of `v * Bernoulli(q)`. Shared by every path that needs it so the
/// results agree bit for bit.
#[inline]
pub(crate) fn bernoulli_variance(v: f64, q: f64) -> f64 {
    v * v * (q * (1.0 - q))
}

/// A point in factor space, `phi_1..phi_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorDraw(Vec<f64>);

impl FactorDraw {
    /// Wraps the factor values.
    pub fn new(values: Vec<f64>) -> Self {
        FactorDraw(values)
    }

    /// The values as a slice.
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Dimension.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// True for a zero-dimensional draw.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<&[f64]> for FactorDraw {
    fn from(v: &[f64]) -> Self {
        FactorDraw(v.to_vec())
    }
}
