use alloc::vec::Vec;
use core::fmt;

use crate::model::Violation;

/// Result alias used throughout the crate.
pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors raised by the pricing and oracle routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A scalar argument is outside the domain of the function.
    Domain {
        /// Name of the offending argument.
        what: &'static str,
        /// The value that was rejected.
        value: f64,
    },
    /// The portfolio violates one or more model invariants.
    InvalidPortfolio(Vec<Violation>),
    /// Attachment and detachment do not satisfy `0 <= a < b <= 1`.
    InvalidTranche {
        /// Attachment point.
        attach: f64,
        /// Detachment point.
        detach: f64,
    },
    /// A factor vector or rule has the wrong dimension.
    DimensionMismatch {
        /// Dimension required by the portfolio.
        expected: usize,
        /// Dimension supplied.
        found: usize,
    },
    /// A size or order parameter is outside the supported range.
    Guard {
        /// Name of the guarded parameter.
        what: &'static str,
        /// Supplied value.
        value: usize,
        /// Smallest accepted value.
        min: usize,
        /// Largest accepted value.
        max: usize,
    },
    /// The conditional loss is deterministic (zero variance) or its
    /// standardized moments are not representable.
    Degenerate,
    /// An expansion was constructed from inconsistent parts.
    InvalidExpansion(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "{what} out of domain: {value}"),
            Error::InvalidPortfolio(violations) => {
                write!(f, "invalid portfolio ({} violations)", violations.len())?;
                for v in violations {
                    write!(f, "; {v}")?;
                }
                Ok(())
            }
            Error::InvalidTranche { attach, detach } => {
                write!(f, "invalid tranche [{attach}, {detach}]: need 0 <= a < b <= 1")
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::Guard { what, value, min, max } => {
                write!(f, "{what} = {value} outside supported range [{min}, {max}]")
            }
            Error::Degenerate => f.write_str("degenerate conditional loss (zero variance)"),
            Error::InvalidExpansion(why) => write!(f, "invalid expansion: {why}"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn guard(what: &'static str, value: usize, min: usize, max: usize) -> Result<()> {
    if value < min || value > max {
        Err(Error::Guard { what, value, min, max })
    } else {
        Ok(())
    }
}
