//! JSON and CSV output records.
//!
//! JSON carries full precision. CSV writes integers in full and reals with
//! six significant digits, `%g` style, always with a `.` decimal separator.
//! Absent values are `null` in JSON and empty in CSV.

use std::io::Write;

use serde::Serialize;

use crate::bench::{Snapshot, TrialStatistics};
use crate::error::Result;
use crate::estimates::{ExactCounts, Quantity, TriangleEstimates};
use crate::estimator::AlgorithmConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Formats a real with six significant digits the way C's `%g` does.
pub fn format_real(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    // `{:.5e}` rounds to six significant digits and tells us the exponent
    // after rounding.
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..6).contains(&exp) {
        let decimals = (5 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt_real(x: Option<f64>) -> String {
    x.map(format_real).unwrap_or_default()
}

/// Something printable as one JSON object or as CSV rows.
pub trait Record: Serialize {
    fn csv_header() -> Vec<&'static str>;
    fn csv_rows(&self) -> Vec<Vec<String>>;
}

/// Writes one record in `format`, header included for CSV.
pub fn write_record<R: Record, W: Write>(out: &mut W, format: Format, record: &R) -> Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer(&mut *out, record)?;
            out.write_all(b"\n")?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(R::csv_header())?;
            for row in record.csv_rows() {
                w.write_record(row)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

/// Streams records one line at a time, flushing after each, for live
/// consumers. JSON output is one object per line.
pub struct LineWriter<'a, W: Write> {
    out: &'a mut W,
    format: Format,
    header_written: bool,
}

impl<'a, W: Write> LineWriter<'a, W> {
    pub fn new(out: &'a mut W, format: Format) -> Self {
        LineWriter {
            out,
            format,
            header_written: false,
        }
    }

    pub fn write<R: Record>(&mut self, record: &R) -> Result<()> {
        match self.format {
            Format::Json => {
                serde_json::to_writer(&mut *self.out, record)?;
                self.out.write_all(b"\n")?;
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(&mut *self.out);
                if !self.header_written {
                    w.write_record(R::csv_header())?;
                    self.header_written = true;
                }
                for row in record.csv_rows() {
                    w.write_record(row)?;
                }
                w.flush()?;
            }
        }
        self.out.flush()?;
        Ok(())
    }
}

impl Record for ExactCounts {
    fn csv_header() -> Vec<&'static str> {
        Quantity::ALL.iter().map(|q| q.name()).collect()
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        vec![Quantity::ALL
            .iter()
            .map(|&q| self.get(q).to_string())
            .collect()]
    }
}

/// Output of a single estimation pass.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateRecord {
    pub inner: u64,
    pub hybrid: f64,
    pub outer: f64,
    pub ccc: f64,
    pub tcc: f64,
    pub ttc: f64,
    pub ttt: f64,
    pub observed: u64,
    pub sampled: usize,
    pub memory_used: usize,
    pub memory_budget: usize,
    pub utilization: f64,
    pub elapsed_seconds: Option<f64>,
    pub throughput_kbps: Option<f64>,
    pub seed: u64,
}

impl EstimateRecord {
    pub fn estimates(&self) -> TriangleEstimates {
        TriangleEstimates {
            inner: self.inner,
            hybrid: self.hybrid,
            outer: self.outer,
            ccc: self.ccc,
            tcc: self.tcc,
            ttc: self.ttc,
            ttt: self.ttt,
        }
    }
}

impl Record for EstimateRecord {
    fn csv_header() -> Vec<&'static str> {
        vec![
            "inner",
            "hybrid",
            "outer",
            "ccc",
            "tcc",
            "ttc",
            "ttt",
            "observed",
            "sampled",
            "memory_used",
            "memory_budget",
            "utilization",
            "elapsed_seconds",
            "throughput_kbps",
            "seed",
        ]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            self.inner.to_string(),
            format_real(self.hybrid),
            format_real(self.outer),
            format_real(self.ccc),
            format_real(self.tcc),
            format_real(self.ttc),
            format_real(self.ttt),
            self.observed.to_string(),
            self.sampled.to_string(),
            self.memory_used.to_string(),
            self.memory_budget.to_string(),
            format_real(self.utilization),
            opt_real(self.elapsed_seconds),
            opt_real(self.throughput_kbps),
            self.seed.to_string(),
        ]]
    }
}

/// One row of a tracking series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SnapshotRecord {
    pub edges_processed: u64,
    pub inner: u64,
    pub hybrid: f64,
    pub outer: f64,
    pub ccc: f64,
    pub tcc: f64,
    pub ttc: f64,
    pub ttt: f64,
    pub utilization: f64,
    pub elapsed: Option<f64>,
}

impl SnapshotRecord {
    pub fn new(s: &Snapshot, timing: bool) -> Self {
        let e = &s.estimates;
        SnapshotRecord {
            edges_processed: s.edges_processed,
            inner: e.inner,
            hybrid: e.hybrid,
            outer: e.outer,
            ccc: e.ccc,
            tcc: e.tcc,
            ttc: e.ttc,
            ttt: e.ttt,
            utilization: s.utilization,
            elapsed: timing.then_some(s.elapsed_seconds),
        }
    }
}

impl Record for SnapshotRecord {
    fn csv_header() -> Vec<&'static str> {
        vec![
            "edges_processed",
            "inner",
            "hybrid",
            "outer",
            "ccc",
            "tcc",
            "ttc",
            "ttt",
            "utilization",
            "elapsed",
        ]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            self.edges_processed.to_string(),
            self.inner.to_string(),
            format_real(self.hybrid),
            format_real(self.outer),
            format_real(self.ccc),
            format_real(self.tcc),
            format_real(self.ttc),
            format_real(self.ttt),
            format_real(self.utilization),
            opt_real(self.elapsed),
        ]]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantityRow {
    pub quantity: Quantity,
    pub exact: u64,
    pub mean: f64,
    pub stderr: f64,
    pub variance: f64,
    pub variance_bound: f64,
    pub relative_error_of_mean: Option<f64>,
    pub mean_relative_error: Option<f64>,
    pub median_relative_error: Option<f64>,
}

/// Summary of a multi-trial run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub algorithm: String,
    pub memory_budget: usize,
    pub tau: Option<f64>,
    pub max_subsets: Option<usize>,
    pub trials: usize,
    pub base_seed: u64,
    pub edges: u64,
    pub mean_utilization: f64,
    pub memory_violations: u64,
    pub quantities: Vec<QuantityRow>,
}

impl BenchRecord {
    pub fn new(config: &AlgorithmConfig, stats: &TrialStatistics) -> Self {
        let partitioned = config.kind == crate::estimator::AlgorithmKind::HtCountP;
        let n = stats.outcomes.len() as f64;
        BenchRecord {
            algorithm: config.kind.to_string(),
            memory_budget: config.budget,
            tau: partitioned.then_some(config.tau),
            max_subsets: partitioned.then_some(config.max_subsets),
            trials: stats.trials,
            base_seed: stats.base_seed,
            edges: stats.outcomes.first().map_or(0, |o| o.observed),
            mean_utilization: stats
                .outcomes
                .iter()
                .map(|o| crate::bench::memory_utilization(o.memory_used, config.budget))
                .sum::<f64>()
                / n,
            memory_violations: stats.memory_violations(),
            quantities: stats
                .summaries
                .iter()
                .map(|s| QuantityRow {
                    quantity: s.quantity,
                    exact: s.exact,
                    mean: s.mean,
                    stderr: s.stderr,
                    variance: s.variance,
                    variance_bound: s.variance_bound,
                    relative_error_of_mean: s.relative_error_of_mean,
                    mean_relative_error: s.mean_relative_error,
                    median_relative_error: s.median_relative_error,
                })
                .collect(),
        }
    }
}

impl Record for BenchRecord {
    fn csv_header() -> Vec<&'static str> {
        vec![
            "algorithm",
            "memory_budget",
            "tau",
            "max_subsets",
            "trials",
            "base_seed",
            "edges",
            "mean_utilization",
            "memory_violations",
            "quantity",
            "exact",
            "mean",
            "stderr",
            "variance",
            "variance_bound",
            "relative_error_of_mean",
            "mean_relative_error",
            "median_relative_error",
        ]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.quantities
            .iter()
            .map(|q| {
                vec![
                    self.algorithm.clone(),
                    self.memory_budget.to_string(),
                    opt_real(self.tau),
                    self.max_subsets.map(|n| n.to_string()).unwrap_or_default(),
                    self.trials.to_string(),
                    self.base_seed.to_string(),
                    self.edges.to_string(),
                    format_real(self.mean_utilization),
                    self.memory_violations.to_string(),
                    q.quantity.name().to_string(),
                    q.exact.to_string(),
                    format_real(q.mean),
                    format_real(q.stderr),
                    format_real(q.variance),
                    format_real(q.variance_bound),
                    opt_real(q.relative_error_of_mean),
                    opt_real(q.mean_relative_error),
                    opt_real(q.median_relative_error),
                ]
            })
            .collect()
    }
}
