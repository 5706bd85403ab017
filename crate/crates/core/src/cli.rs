//! Command-line interface.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{run_trials, throughput, track_with};
use crate::estimator::{AlgorithmConfig, AlgorithmKind, Estimator};
use crate::hypergraph::Hypergraph;
use crate::oracle::{exact_count_with_cap, DEFAULT_EDGE_CAP};
use crate::partition::{default_tau, Routing};
use crate::report::{
    write_record, BenchRecord, EstimateRecord, Format, LineWriter, SnapshotRecord,
};
use crate::stream::{write_stream, StreamSource};
use crate::synthetic::{uniform_sizes_stream, zipf_sizes_stream};

#[derive(Debug, Parser)]
#[command(
    name = "hypertri",
    version,
    about = "Triangle counting over hypergraph streams"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,

    /// Omit wall-clock fields (elapsed time, throughput) so output depends
    /// only on the input and flags.
    #[arg(long, global = true)]
    pub no_timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgoArg {
    Htcount,
    #[value(name = "htcount-p")]
    HtcountP,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RoutingArg {
    CatchUp,
    BelowMean,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count triangles exactly (small inputs only).
    Exact {
        /// Input stream, or '-' for standard input.
        file: PathBuf,
        /// Refuse inputs with more edges than this.
        #[arg(long, default_value_t = DEFAULT_EDGE_CAP)]
        max_edges: usize,
    },
    /// Estimate triangle counts in one pass.
    Estimate {
        file: PathBuf,
        #[command(flatten)]
        algo: AlgoArgs,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Run many seeded trials and compare them with the exact counts.
    Bench {
        file: PathBuf,
        #[command(flatten)]
        algo: AlgoArgs,
        /// Number of trials; seeds are seed, seed+1, ...
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        trials: u64,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Record estimates at evenly spaced points of the stream.
    Track {
        file: PathBuf,
        #[command(flatten)]
        algo: AlgoArgs,
        #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        snapshots: u64,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Write a synthetic stream.
    Generate {
        #[arg(long, default_value_t = 300)]
        edges: usize,
        #[arg(long, default_value_t = 2)]
        min_size: usize,
        #[arg(long, default_value_t = 10)]
        max_size: usize,
        #[arg(long, default_value_t = 60)]
        universe: u32,
        /// Draw sizes from a power law with this exponent instead of
        /// uniformly.
        #[arg(long)]
        zipf: Option<f64>,
        #[command(flatten)]
        seed: SeedArg,
    },
}

#[derive(Debug, Clone, Copy, Args)]
pub struct SeedArg {
    #[arg(long, env = "HYPERTRI_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct AlgoArgs {
    #[arg(long, value_enum)]
    pub algo: AlgoArg,
    /// Memory budget in vertex slots (4 bytes each).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub memory: u64,
    /// Utilization threshold for opening a new subset (htcount-p only).
    /// Defaults by budget: 0.85 below 4096 slots, 0.9 up to 16383, then
    /// 0.95, 0.975 and 0.99.
    #[arg(long, value_parser = parse_tau)]
    pub tau: Option<f64>,
    /// Maximum number of subsets (htcount-p only).
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_subsets: u64,
    /// Subset routing rule (htcount-p only).
    #[arg(long, value_enum, default_value_t = RoutingArg::CatchUp)]
    pub routing: RoutingArg,
    /// Count an arrival even when the eviction loop removed it again
    /// (htcount only).
    #[arg(long)]
    pub count_evicted: bool,
}

fn parse_tau(s: &str) -> Result<f64, String> {
    let tau: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if tau > 0.0 && tau <= 1.0 {
        Ok(tau)
    } else {
        Err(format!("tau must be in (0, 1], got {s}"))
    }
}

impl AlgoArgs {
    pub fn config(&self) -> anyhow::Result<AlgorithmConfig> {
        let budget = usize::try_from(self.memory).context("memory budget too large")?;
        let kind = match self.algo {
            AlgoArg::Htcount => AlgorithmKind::HtCount,
            AlgoArg::HtcountP => AlgorithmKind::HtCountP,
        };
        let config = AlgorithmConfig {
            kind,
            budget,
            tau: self.tau.unwrap_or_else(|| default_tau(budget)),
            max_subsets: self.max_subsets as usize,
            routing: match self.routing {
                RoutingArg::CatchUp => Routing::CatchUp,
                RoutingArg::BelowMean => Routing::BelowMean,
            },
            count_evicted: self.count_evicted,
        };
        if kind == AlgorithmKind::HtCount && self.tau.is_some() {
            log::warn!("--tau is ignored by htcount");
        }
        if kind == AlgorithmKind::HtCountP && self.count_evicted {
            bail!("--count-evicted only applies to htcount");
        }
        Ok(config)
    }
}

fn open(file: &PathBuf) -> anyhow::Result<StreamSource<Box<dyn std::io::BufRead>>> {
    StreamSource::open(file).with_context(|| format!("cannot read {}", file.display()))
}

fn load(file: &PathBuf) -> anyhow::Result<Hypergraph> {
    let src = open(file)?;
    let edges = src
        .collect::<crate::error::Result<Vec<_>>>()
        .with_context(|| format!("{}", file.display()))?;
    Ok(Hypergraph::new(edges)?)
}

/// Executes a parsed command line, writing results to `out`.
pub fn run<W: Write>(cli: &Cli, out: &mut W) -> anyhow::Result<()> {
    let format = Format::from(cli.format);
    let timing = !cli.no_timing;
    match &cli.command {
        Command::Exact { file, max_edges } => {
            let h = load(file)?;
            let counts = exact_count_with_cap(&h, *max_edges)?;
            write_record(out, format, &counts)?;
        }
        Command::Estimate { file, algo, seed } => {
            let config = algo.config()?;
            let mut est = config.build(seed.seed)?;
            let start = Instant::now();
            let mut src = open(file)?;
            for e in src.by_ref() {
                let e = e.with_context(|| format!("{}", file.display()))?;
                est.process(&e);
            }
            let elapsed = start.elapsed().as_secs_f64();
            let e = est.estimates();
            let record = EstimateRecord {
                inner: e.inner,
                hybrid: e.hybrid,
                outer: e.outer,
                ccc: e.ccc,
                tcc: e.tcc,
                ttc: e.ttc,
                ttt: e.ttt,
                observed: est.observed(),
                sampled: est.sampled(),
                memory_used: est.memory_used(),
                memory_budget: est.memory_budget(),
                utilization: est.utilization(),
                elapsed_seconds: timing.then_some(elapsed),
                throughput_kbps: if timing {
                    throughput(src.bytes_read(), elapsed)
                } else {
                    None
                },
                seed: seed.seed,
            };
            write_record(out, format, &record)?;
        }
        Command::Bench {
            file,
            algo,
            trials,
            seed,
        } => {
            let config = algo.config()?;
            let h = load(file)?;
            let stats = run_trials(&h, &config, *trials as usize, seed.seed)?;
            write_record(out, format, &BenchRecord::new(&config, &stats))?;
        }
        Command::Track {
            file,
            algo,
            snapshots,
            seed,
        } => {
            let config = algo.config()?;
            let h = load(file)?;
            let mut lines = LineWriter::new(out, format);
            track_with(h.edges(), &config, seed.seed, *snapshots, |s| {
                lines.write(&SnapshotRecord::new(s, timing))
            })?;
        }
        Command::Generate {
            edges,
            min_size,
            max_size,
            universe,
            zipf,
            seed,
        } => {
            let h = match zipf {
                Some(exp) => {
                    zipf_sizes_stream(*edges, *min_size, *max_size, *exp, *universe, seed.seed)?
                }
                None => uniform_sizes_stream(*edges, *min_size, *max_size, *universe, seed.seed)?,
            };
            write_stream(&h, &mut *out)?;
        }
    }
    out.flush()?;
    Ok(())
}
