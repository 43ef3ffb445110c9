//! Expected tranche loss in the Gaussian m-factor default model.
//!
//! Conditional on the systematic factors, portfolio loss is a sum of
//! independent scaled Bernoulli variables. Its cumulants are known in closed
//! form, which gives the coefficients of a truncated Gram-Charlier (Hermite)
//! expansion of the conditional loss density. The tranche payoff integrates
//! against that density analytically, leaving only the outer integral over the
//! factors, which is done by Gauss-Hermite quadrature.
//!
//! The crate is `no_std` and needs only `alloc`. File formats, the command
//! line and threaded drivers live in `tranche-cli`.
//!
//! Module map:
//! - [`model`]: loans, portfolios, conditional default probabilities.
//! - [`special`]: normal pdf/cdf/quantile and Hermite polynomials.
//! - [`moments`]: Bernoulli cumulants and conditional central moments.
//! - [`expansion`]: Gram-Charlier coefficients and the truncated density.
//! - [`tranche`]: tranche profile and the closed-form stop-loss transform.
//! - [`quadrature`]: Gauss-Hermite rules and tensor products.
//! - [`pricer`]: the assembled expected tranche loss.
//! - [`simulation`]: Monte Carlo, enumeration and convolution oracles.
//! - [`synth`]: the standard test portfolio family.
#![no_std]
#![deny(unsafe_code)]
#![warn(missing_docs)]
// Index loops mirror the recurrences; negated comparisons are there to
// reject NaN; quantile coefficients are kept as published.
#![allow(
    clippy::needless_range_loop,
    clippy::neg_cmp_op_on_partial_ord,
    clippy::excessive_precision
)]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod error;
pub mod expansion;
pub mod model;
pub mod moments;
pub mod pricer;
pub mod quadrature;
pub mod simulation;
pub mod special;
pub mod synth;
pub mod tranche;

pub use error::{Error, Result};
pub use expansion::GCExpansion;
pub use model::{FactorDraw, Loan, Portfolio, Violation, ViolationKind};
pub use moments::ConditionalMoments;
pub use pricer::{Method, PriceResult};
pub use quadrature::QuadratureRule;
pub use simulation::McResult;
pub use tranche::TrancheSpec;
