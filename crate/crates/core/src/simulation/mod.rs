//! Ground-truth engines: seeded Monte Carlo and exact conditional oracles.

pub mod convolution;
pub mod enumeration;
pub mod mc;

pub use convolution::{
    exact_conditional_distribution_convolution, exact_tranche_loss_convolution, ConvolutionPrice, LossDistribution,
};
pub use enumeration::{exact_tranche_loss_enumeration, exact_tranche_losses_enumeration, for_each_pattern};
pub use mc::{mc_expected_tranche_loss, mc_expected_tranche_losses, McEstimate, McResult, McSampler};
