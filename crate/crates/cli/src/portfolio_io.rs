//! Portfolio files.
//!
//! JSON: `{"factor_count": m, "loans": [{"f": .., "p": .., "r": .., "w": [..]}, ..]}`.
//! CSV: header `f,p,r,w1,..,wm`, one loan per row.

use std::fs;
use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use tranche_core::{Loan, Portfolio};

use crate::error::{CliError, Position, Result};
use crate::format::{csv_writer, fmt_f64, to_json_line};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PortfolioFormat {
    Json,
    Csv,
}

impl PortfolioFormat {
    /// Guesses the format from a `.json` or `.csv` extension.
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "json" => Some(PortfolioFormat::Json),
            "csv" => Some(PortfolioFormat::Csv),
            _ => None,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LoanRecord {
    f: f64,
    p: f64,
    r: f64,
    w: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PortfolioFile {
    factor_count: usize,
    loans: Vec<LoanRecord>,
}

fn checked(p: Portfolio) -> Result<Portfolio> {
    let violations = p.validate();
    if violations.is_empty() {
        Ok(p)
    } else {
        Err(CliError::InvalidPortfolio(violations))
    }
}

/// Parses JSON text without validating the model constraints.
pub fn parse_json(text: &str, origin: &str) -> Result<Portfolio> {
    let file: PortfolioFile = serde_json::from_str(text).map_err(|e| {
        let position = (e.line() > 0).then(|| Position::Column {
            line: e.line() as u64,
            column: e.column() as u64,
        });
        CliError::parse(origin, position, e.to_string())
    })?;
    let loans = file.loans.into_iter().map(|l| Loan::new(l.f, l.p, l.r, l.w)).collect();
    Ok(Portfolio::new(loans, file.factor_count))
}

/// Parses CSV text without validating the model constraints. The factor
/// count is the number of `w` columns.
pub fn parse_csv(text: &str, origin: &str) -> Result<Portfolio> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| CliError::parse(origin, Some(Position::Line(1)), e.to_string()))?
        .clone();
    let names: Vec<&str> = headers.iter().collect();
    let factors = names.len().saturating_sub(3);
    let expected: Vec<String> = ["f", "p", "r"]
        .iter()
        .map(|s| s.to_string())
        .chain((1..=factors).map(|k| format!("w{k}")))
        .collect();
    if factors == 0 || names != expected {
        return Err(CliError::parse(
            origin,
            Some(Position::Line(1)),
            format!("header must be f,p,r,w1[,w2,..], found '{}'", names.join(",")),
        ));
    }
    let mut loans = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            CliError::parse(origin, Some(Position::Line(line)), e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 3 + factors {
            return Err(CliError::parse(
                origin,
                Some(Position::Line(line)),
                format!(
                    "row {}: expected {} loading column(s), found {}",
                    row + 1,
                    factors,
                    record.len() as isize - 3
                ),
            ));
        }
        let mut values = Vec::with_capacity(record.len());
        for (field, name) in record.iter().zip(&expected) {
            let v: f64 = field.parse().map_err(|_| {
                CliError::parse(
                    origin,
                    Some(Position::Field {
                        line,
                        field: name.clone(),
                    }),
                    format!("row {}: '{}' is not a number", row + 1, field),
                )
            })?;
            values.push(v);
        }
        loans.push(Loan::new(values[0], values[1], values[2], values[3..].to_vec()));
    }
    Ok(Portfolio::new(loans, factors))
}

/// Parses and validates a portfolio.
pub fn parse_portfolio(text: &str, format: PortfolioFormat, origin: &str) -> Result<Portfolio> {
    let p = match format {
        PortfolioFormat::Json => parse_json(text, origin)?,
        PortfolioFormat::Csv => parse_csv(text, origin)?,
    };
    checked(p)
}

/// Reads, parses and validates a portfolio file. Without an explicit
/// format the file extension decides.
pub fn load_portfolio(path: &Path, format: Option<PortfolioFormat>) -> Result<Portfolio> {
    let origin = path.display().to_string();
    let format = match format.or_else(|| PortfolioFormat::from_path(path)) {
        Some(f) => f,
        None => {
            return Err(CliError::Config(format!(
                "{origin}: cannot tell the portfolio format; use a .json or .csv extension or pass --input-format"
            )))
        }
    };
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: origin.clone(),
        source,
    })?;
    parse_portfolio(&text, format, &origin)
}

/// Serializes a portfolio. Floats carry 17 significant digits.
pub fn portfolio_to_string(p: &Portfolio, format: PortfolioFormat) -> String {
    match format {
        PortfolioFormat::Json => {
            let mut out = format!("{{\"factor_count\":{},\"loans\":[", p.factor_count());
            for (i, l) in p.loans().iter().enumerate() {
                out.push_str(if i == 0 { "\n  " } else { ",\n  " });
                out.push_str(&to_json_line(&LoanRecord {
                    f: l.notional_fraction(),
                    p: l.default_prob(),
                    r: l.recovery(),
                    w: l.loadings().to_vec(),
                }));
            }
            out.push_str("\n]}\n");
            out
        }
        PortfolioFormat::Csv => {
            let mut w = csv_writer(Vec::new());
            let mut header = vec!["f".to_string(), "p".into(), "r".into()];
            header.extend((1..=p.factor_count()).map(|k| format!("w{k}")));
            w.write_record(&header).expect("in-memory write");
            for l in p.loans() {
                let mut row = vec![
                    fmt_f64(l.notional_fraction()),
                    fmt_f64(l.default_prob()),
                    fmt_f64(l.recovery()),
                ];
                row.extend(l.loadings().iter().map(|&x| fmt_f64(x)));
                w.write_record(&row).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8")
        }
    }
}

/// Writes a portfolio to `path`.
pub fn save_portfolio(p: &Portfolio, format: PortfolioFormat, path: &Path) -> Result<()> {
    let text = portfolio_to_string(p, format);
    fs::File::create(path)
        .and_then(|mut f| f.write_all(text.as_bytes()))
        .map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })
}
