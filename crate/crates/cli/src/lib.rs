//! File formats, command line and threaded drivers for `tranche-core`.

pub mod cli;
pub mod error;
pub mod format;
pub mod parallel;
pub mod portfolio_io;
pub mod results;
pub mod run;

pub use error::{CliError, Result};
pub use portfolio_io::{load_portfolio, parse_portfolio, portfolio_to_string, save_portfolio, PortfolioFormat};
pub use results::{render_results, OutputFormat, ResultRow};
pub use run::{compute, run, PortfolioSource, RunConfig};
