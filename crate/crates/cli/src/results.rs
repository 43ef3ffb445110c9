//! Result rows: `n,attach,detach,method,order_N,quad_order,samples,seed,value,std_error`.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;
use tranche_core::Method;

use crate::format::{csv_writer, fmt_f64, to_json_line};

pub const COLUMNS: [&str; 10] = [
    "n",
    "attach",
    "detach",
    "method",
    "order_N",
    "quad_order",
    "samples",
    "seed",
    "value",
    "std_error",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// One priced (portfolio, tranche, method) combination. Fields that do not
/// apply to the method are `None` and written empty (CSV) or `null` (JSON).
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub n: usize,
    pub attach: f64,
    pub detach: f64,
    pub method: Method,
    pub order_n: Option<usize>,
    pub quad_order: Option<usize>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub value: f64,
    pub std_error: Option<f64>,
}

#[derive(Serialize)]
struct JsonRow<'a> {
    n: usize,
    attach: f64,
    detach: f64,
    method: &'a str,
    #[serde(rename = "order_N")]
    order_n: Option<usize>,
    quad_order: Option<usize>,
    samples: Option<u64>,
    seed: Option<u64>,
    value: f64,
    std_error: Option<f64>,
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl ResultRow {
    fn csv_fields(&self) -> [String; 10] {
        [
            self.n.to_string(),
            fmt_f64(self.attach),
            fmt_f64(self.detach),
            self.method.as_str().to_string(),
            opt(self.order_n),
            opt(self.quad_order),
            opt(self.samples),
            opt(self.seed),
            fmt_f64(self.value),
            self.std_error.map(fmt_f64).unwrap_or_default(),
        ]
    }
}

/// Renders rows in `format`. The output is a pure function of the rows.
pub fn render_results(rows: &[ResultRow], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => {
            let mut w = csv_writer(Vec::new());
            w.write_record(COLUMNS).expect("in-memory write");
            for row in rows {
                w.write_record(row.csv_fields()).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8")
        }
        OutputFormat::Json => {
            let mut out = String::from("[");
            for (i, r) in rows.iter().enumerate() {
                let line = to_json_line(&JsonRow {
                    n: r.n,
                    attach: r.attach,
                    detach: r.detach,
                    method: r.method.as_str(),
                    order_n: r.order_n,
                    quad_order: r.quad_order,
                    samples: r.samples,
                    seed: r.seed,
                    value: r.value,
                    std_error: r.std_error,
                });
                let _ = write!(out, "{}\n  {line}", if i == 0 { "" } else { "," });
            }
            out.push_str(if rows.is_empty() { "]\n" } else { "\n]\n" });
            out
        }
    }
}
