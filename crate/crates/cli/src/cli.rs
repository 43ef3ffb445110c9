//! Command-line surface.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use tranche_core::{Method, TrancheSpec};

use crate::error::{CliError, Result, EXIT_CONFIG, EXIT_OK};
use crate::parallel::threads_from_env;
use crate::portfolio_io::{portfolio_to_string, PortfolioFormat};
use crate::results::OutputFormat;
use crate::run::{
    run, write_file, PortfolioSource, RunConfig, DEFAULT_GRID_STEP, DEFAULT_ORDER, DEFAULT_QUAD_ORDER, DEFAULT_SAMPLES,
    DEFAULT_SEED,
};

#[derive(Parser, Debug)]
#[command(
    name = "tranche",
    version,
    about = "Expected tranche loss in the Gaussian factor model"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a portfolio and list every violation.
    Validate(Source),
    /// Price tranches with one method (default: hermite).
    Price {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        pricing: Pricing,
        #[arg(long, default_value = "hermite", value_parser = parse_method)]
        method: Method,
    },
    /// Monte Carlo estimate.
    Mc {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        pricing: Pricing,
    },
    /// Exact conditional law (enumeration up to 20 loans, grid convolution beyond).
    Exact {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        pricing: Pricing,
    },
    /// Every portfolio x method x tranche combination.
    Sweep {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        pricing: Pricing,
        #[arg(long, value_delimiter = ',', default_value = "hermite,normal,mc", value_parser = parse_method)]
        methods: Vec<Method>,
    },
    /// Write the standard n-loan test portfolio.
    Synth {
        n: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: PortfolioFormat,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
pub struct Source {
    /// Portfolio file (.json or .csv).
    #[arg(long, conflicts_with = "synth", required_unless_present = "synth")]
    pub portfolio: Option<PathBuf>,
    #[arg(long, value_enum, requires = "portfolio")]
    pub input_format: Option<PortfolioFormat>,
    /// Standard test portfolio sizes, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub synth: Vec<usize>,
}

impl Source {
    fn sources(&self) -> Vec<PortfolioSource> {
        match &self.portfolio {
            Some(path) => vec![PortfolioSource::File {
                path: path.clone(),
                format: self.input_format,
            }],
            None => self.synth.iter().map(|&n| PortfolioSource::Synth(n)).collect(),
        }
    }
}

#[derive(Args, Debug)]
pub struct Pricing {
    /// Attachment points, comma separated, paired with --detach.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub attach: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.03")]
    pub detach: Vec<f64>,
    /// Truncation order N of the expansion.
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    pub order: usize,
    #[arg(long, default_value_t = DEFAULT_QUAD_ORDER)]
    pub quad_order: usize,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: u64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Clamp expansion prices to [0, 1].
    #[arg(long)]
    pub clamp: bool,
    #[arg(long, default_value_t = DEFAULT_GRID_STEP)]
    pub grid_step: f64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutputFormat,
    /// Write results here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn parse_method(s: &str) -> std::result::Result<Method, String> {
    Method::parse(s).ok_or_else(|| format!("unknown method '{s}' (expected hermite, normal, mc or exact)"))
}

fn tranches(attach: &[f64], detach: &[f64]) -> Result<Vec<TrancheSpec>> {
    if attach.len() != detach.len() {
        return Err(CliError::Config(format!(
            "{} attachment point(s) but {} detachment point(s)",
            attach.len(),
            detach.len()
        )));
    }
    attach
        .iter()
        .zip(detach)
        .map(|(&a, &b)| TrancheSpec::new(a, b).map_err(|e| CliError::Config(e.to_string())))
        .collect()
}

fn config(source: &Source, p: &Pricing, methods: Vec<Method>, threads: usize) -> Result<RunConfig> {
    Ok(RunConfig {
        portfolios: source.sources(),
        tranches: tranches(&p.attach, &p.detach)?,
        methods,
        order: p.order,
        quad_order: p.quad_order,
        samples: p.samples,
        seed: p.seed,
        clamp: p.clamp,
        grid_step: p.grid_step,
        threads,
        format: p.format,
        output: p.output.clone(),
    })
}

fn emit(out: &mut dyn Write, text: &str, to_file: bool) -> Result<()> {
    if to_file {
        return Ok(());
    }
    out.write_all(text.as_bytes()).map_err(|source| CliError::Io {
        path: "<stdout>".into(),
        source,
    })
}

/// Executes a parsed command, writing results to `out`.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<()> {
    let threads = threads_from_env()?;
    let cfg = match cli.command {
        Command::Validate(source) => {
            for s in source.sources() {
                let p = s.load()?;
                p.ensure_valid()?;
                let label = match &s {
                    PortfolioSource::Synth(n) => format!("synth {n}"),
                    PortfolioSource::File { path, .. } => path.display().to_string(),
                };
                let line = format!("{label}: valid, {} loans, {} factor(s)\n", p.len(), p.factor_count());
                emit(out, &line, false)?;
            }
            return Ok(());
        }
        Command::Synth { n, format, output } => {
            let p = tranche_core::synth::synth_portfolio(n)?;
            let text = portfolio_to_string(&p, format);
            match &output {
                Some(path) => write_file(path, &text)?,
                None => emit(out, &text, false)?,
            }
            return Ok(());
        }
        Command::Price {
            source,
            pricing,
            method,
        } => config(&source, &pricing, vec![method], threads)?,
        Command::Mc { source, pricing } => config(&source, &pricing, vec![Method::Mc], threads)?,
        Command::Exact { source, pricing } => config(&source, &pricing, vec![Method::Exact], threads)?,
        Command::Sweep {
            source,
            pricing,
            methods,
        } => config(&source, &pricing, methods, threads)?,
    };
    let text = run(&cfg)?;
    emit(out, &text, cfg.output.is_some())
}

/// Parses `args` (program name first), runs, and returns the exit status.
/// Diagnostics go to `err`.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
