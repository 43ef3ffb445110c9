//! Pricing runs: resolve portfolios, price every (portfolio, method,
//! tranche) combination, emit rows.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use tranche_core::pricer::expected_tranche_losses;
use tranche_core::simulation::enumeration::MAX_ENUMERATION_LOANS;
use tranche_core::simulation::{exact_tranche_loss_convolution, exact_tranche_losses_enumeration};
use tranche_core::synth::synth_portfolio;
use tranche_core::{Method, Portfolio, QuadratureRule, TrancheSpec};

use crate::error::{CliError, Result};
use crate::parallel::mc_tranche_losses;
use crate::portfolio_io::{load_portfolio, PortfolioFormat};
use crate::results::{render_results, OutputFormat, ResultRow};

pub const DEFAULT_ORDER: usize = 5;
pub const DEFAULT_QUAD_ORDER: usize = 64;
pub const DEFAULT_SAMPLES: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_GRID_STEP: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub enum PortfolioSource {
    Synth(usize),
    File {
        path: PathBuf,
        format: Option<PortfolioFormat>,
    },
}

impl PortfolioSource {
    pub fn load(&self) -> Result<Portfolio> {
        match self {
            PortfolioSource::Synth(n) => Ok(synth_portfolio(*n)?),
            PortfolioSource::File { path, format } => load_portfolio(path, *format),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub portfolios: Vec<PortfolioSource>,
    pub tranches: Vec<TrancheSpec>,
    pub methods: Vec<Method>,
    /// Truncation order N of the expansion.
    pub order: usize,
    pub quad_order: usize,
    pub samples: u64,
    pub seed: u64,
    pub clamp: bool,
    /// Loss grid for the convolution oracle (portfolios above the
    /// enumeration limit).
    pub grid_step: f64,
    /// Monte Carlo worker threads, 0 for automatic.
    pub threads: usize,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            portfolios: Vec::new(),
            tranches: vec![TrancheSpec::equity(0.03).expect("valid tranche")],
            methods: vec![Method::Hermite],
            order: DEFAULT_ORDER,
            quad_order: DEFAULT_QUAD_ORDER,
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
            clamp: false,
            grid_step: DEFAULT_GRID_STEP,
            threads: 0,
            format: OutputFormat::Csv,
            output: None,
        }
    }
}

impl RunConfig {
    fn check(&self) -> Result<()> {
        if self.portfolios.is_empty() {
            return Err(CliError::Config("no portfolio given".into()));
        }
        if self.tranches.is_empty() {
            return Err(CliError::Config("no tranche given".into()));
        }
        if self.methods.is_empty() {
            return Err(CliError::Config("no method given".into()));
        }
        Ok(())
    }
}

fn price_one(cfg: &RunConfig, p: &Portfolio, method: Method, rule: Option<&QuadratureRule>) -> Result<Vec<ResultRow>> {
    let rule = || rule.expect("quadrature rule is built for every non-MC method");
    let base = |t: &TrancheSpec, value: f64| ResultRow {
        n: p.len(),
        attach: t.attach(),
        detach: t.detach(),
        method,
        order_n: None,
        quad_order: None,
        samples: None,
        seed: None,
        value,
        std_error: None,
    };
    let rows = match method {
        Method::Hermite | Method::Normal => {
            let order = if method == Method::Normal { 1 } else { cfg.order };
            let prices = expected_tranche_losses(p, &cfg.tranches, order, rule(), cfg.clamp)?;
            cfg.tranches
                .iter()
                .zip(prices)
                .map(|(t, r)| ResultRow {
                    order_n: Some(order),
                    quad_order: Some(r.quad_order),
                    ..base(t, r.value)
                })
                .collect()
        }
        Method::Mc => {
            let est = mc_tranche_losses(p, &cfg.tranches, cfg.samples, cfg.seed, cfg.threads)?;
            cfg.tranches
                .iter()
                .zip(est.tranches)
                .map(|(t, r)| ResultRow {
                    samples: Some(r.samples),
                    seed: Some(r.seed),
                    std_error: Some(r.std_error),
                    ..base(t, r.estimate)
                })
                .collect()
        }
        Method::Exact => {
            let values = if p.len() <= MAX_ENUMERATION_LOANS {
                exact_tranche_losses_enumeration(p, &cfg.tranches, rule())?
            } else {
                cfg.tranches
                    .iter()
                    .map(|t| exact_tranche_loss_convolution(p, t, rule(), cfg.grid_step).map(|c| c.value))
                    .collect::<Result<_, _>>()?
            };
            cfg.tranches
                .iter()
                .zip(values)
                .map(|(t, v)| ResultRow {
                    quad_order: Some(rule().order()),
                    ..base(t, v)
                })
                .collect()
        }
    };
    Ok(rows)
}

/// Prices every combination: portfolios outermost, then methods, then
/// tranches.
pub fn compute(cfg: &RunConfig) -> Result<Vec<ResultRow>> {
    cfg.check()?;
    let mut rows = Vec::new();
    for source in &cfg.portfolios {
        let p = source.load()?;
        p.ensure_valid()?;
        let needs_rule = cfg.methods.iter().any(|m| *m != Method::Mc);
        let rule = if needs_rule {
            Some(QuadratureRule::for_factors(cfg.quad_order, p.factor_count())?)
        } else {
            None
        };
        for &method in &cfg.methods {
            rows.extend(price_one(cfg, &p, method, rule.as_ref())?);
        }
    }
    Ok(rows)
}

/// [`compute`], then write the rows to the configured output (or return
/// them rendered when there is none).
pub fn run(cfg: &RunConfig) -> Result<String> {
    let rows = compute(cfg)?;
    let text = render_results(&rows, cfg.format);
    if let Some(path) = &cfg.output {
        write_file(path, &text)?;
    }
    Ok(text)
}

pub(crate) fn write_file(path: &PathBuf, text: &str) -> Result<()> {
    fs::File::create(path)
        .and_then(|mut f| f.write_all(text.as_bytes()))
        .map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })
}
