//! Accuracy metrics, variance bounds and the Monte-Carlo trial harness.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::correction::joint_correction;
use crate::correction::SubsetStats;
use crate::error::{Error, Result};
use crate::estimates::{ExactCounts, Quantity, TriangleEstimates};
use crate::estimator::{AlgorithmConfig, Estimator};
use crate::hypergraph::{Hyperedge, Hypergraph};
use crate::oracle::exact_count;

/// |exact − estimate| / exact; `None` when the exact count is zero.
pub fn relative_error(estimate: f64, exact: f64) -> Option<f64> {
    (exact > 0.0).then(|| (exact - estimate).abs() / exact)
}

pub fn memory_utilization(used_slots: usize, budget: usize) -> f64 {
    debug_assert!(budget > 0);
    used_slots as f64 / budget as f64
}

/// KB of raw input consumed per second; `None` for a non-positive duration.
pub fn throughput(bytes_processed: u64, elapsed_seconds: f64) -> Option<f64> {
    (elapsed_seconds > 0.0).then(|| bytes_processed as f64 / 1024.0 / elapsed_seconds)
}

/// (2c² − c)·Φ − c².
pub fn variance_bound_partitioned(c: f64, phi: f64) -> f64 {
    if c == 0.0 {
        return 0.0;
    }
    (2.0 * c * c - c) * phi - c * c
}

/// Hybrid variance bound for a single reservoir that saw `observed` edges
/// and holds `sampled`.
pub fn variance_bound_hybrid(c: f64, observed: u64, sampled: u64) -> Result<f64> {
    let phi = joint_correction(&[(SubsetStats::new(observed, sampled), 2)])?;
    Ok(variance_bound_partitioned(c, phi))
}

/// Outer (and hyper-edge class) variance bound for a single reservoir.
pub fn variance_bound_outer(c: f64, observed: u64, sampled: u64) -> Result<f64> {
    let phi = joint_correction(&[(SubsetStats::new(observed, sampled), 3)])?;
    Ok(variance_bound_partitioned(c, phi))
}

/// End-of-stream state of one seeded run.
#[derive(Debug, Clone, Serialize)]
pub struct TrialOutcome {
    pub seed: u64,
    pub estimates: TriangleEstimates,
    pub observed: u64,
    pub sampled: usize,
    pub memory_used: usize,
    /// Largest pair correction factor at the end of the stream (Φ₁).
    pub pair_phi: f64,
    /// Largest triple correction factor at the end of the stream (Φ₂).
    pub triple_phi: f64,
    /// Edges after which memory exceeded the budget. Always zero unless the
    /// sampler is broken.
    pub memory_violations: u64,
    pub sampled_arrivals: Vec<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuantitySummary {
    pub quantity: Quantity,
    pub exact: u64,
    pub mean: f64,
    /// Unbiased sample variance over trials.
    pub variance: f64,
    pub stderr: f64,
    /// Relative error of the trial mean.
    pub relative_error_of_mean: Option<f64>,
    /// Mean of per-trial relative errors.
    pub mean_relative_error: Option<f64>,
    /// Median of per-trial relative errors.
    pub median_relative_error: Option<f64>,
    /// Closed-form variance bound, averaged over trials' end-of-stream Φ.
    pub variance_bound: f64,
}

impl QuantitySummary {
    /// |mean − exact| in units of the standard error. Zero-variance
    /// quantities give 0 when exact and infinity otherwise.
    pub fn z_score(&self) -> f64 {
        let diff = (self.mean - self.exact as f64).abs();
        if diff == 0.0 {
            0.0
        } else if self.stderr == 0.0 {
            f64::INFINITY
        } else {
            diff / self.stderr
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialStatistics {
    pub trials: usize,
    pub base_seed: u64,
    pub exact: ExactCounts,
    pub outcomes: Vec<TrialOutcome>,
    pub summaries: Vec<QuantitySummary>,
}

impl TrialStatistics {
    pub fn summary(&self, q: Quantity) -> &QuantitySummary {
        self.summaries
            .iter()
            .find(|s| s.quantity == q)
            .expect("every quantity is summarised")
    }

    pub fn memory_violations(&self) -> u64 {
        self.outcomes.iter().map(|o| o.memory_violations).sum()
    }
}

/// Runs one seeded estimator over `stream`, checking the memory budget after
/// every edge.
pub fn run_single(
    stream: &[Hyperedge],
    config: &AlgorithmConfig,
    seed: u64,
) -> Result<TrialOutcome> {
    let mut est = config.build(seed)?;
    let mut violations = 0;
    for e in stream {
        est.process(e);
        if est.memory_used() > est.memory_budget() {
            violations += 1;
        }
    }
    Ok(TrialOutcome {
        seed,
        estimates: *est.estimates(),
        observed: est.observed(),
        sampled: est.sampled(),
        memory_used: est.memory_used(),
        pair_phi: est.phi(2),
        triple_phi: est.phi(3),
        memory_violations: violations,
        sampled_arrivals: est.sampled_arrivals(),
    })
}

fn median(mut xs: Vec<f64>) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    Some(if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    })
}

fn summarise(q: Quantity, exact: u64, outcomes: &[TrialOutcome]) -> QuantitySummary {
    let n = outcomes.len() as f64;
    let values: Vec<f64> = outcomes.iter().map(|o| o.estimates.get(q)).collect();
    let mean = values.iter().sum::<f64>() / n;
    let variance = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let c = exact as f64;
    let rel: Vec<f64> = values
        .iter()
        .filter_map(|&v| relative_error(v, c))
        .collect();
    let variance_bound = match q.arity() {
        1 => 0.0,
        arity => {
            outcomes
                .iter()
                .map(|o| {
                    let phi = if arity == 2 { o.pair_phi } else { o.triple_phi };
                    variance_bound_partitioned(c, phi)
                })
                .sum::<f64>()
                / n
        }
    };
    QuantitySummary {
        quantity: q,
        exact,
        mean,
        variance,
        stderr: (variance / n).sqrt(),
        relative_error_of_mean: relative_error(mean, c),
        mean_relative_error: (!rel.is_empty()).then(|| rel.iter().sum::<f64>() / rel.len() as f64),
        median_relative_error: median(rel),
        variance_bound,
    }
}

/// Runs `trials` independent estimators with seeds `base_seed + k` and
/// compares them with the exact counts. Trials run in parallel; results are
/// ordered by seed and deterministic.
pub fn run_trials(
    stream: &Hypergraph,
    config: &AlgorithmConfig,
    trials: usize,
    base_seed: u64,
) -> Result<TrialStatistics> {
    let exact = exact_count(stream)?;
    run_trials_against(stream.edges(), exact, config, trials, base_seed)
}

/// [`run_trials`] with precomputed exact counts.
pub fn run_trials_against(
    stream: &[Hyperedge],
    exact: ExactCounts,
    config: &AlgorithmConfig,
    trials: usize,
    base_seed: u64,
) -> Result<TrialStatistics> {
    if trials < 2 {
        return Err(Error::InvalidConfig("at least 2 trials are needed".into()));
    }
    let outcomes = (0..trials as u64)
        .into_par_iter()
        .map(|k| run_single(stream, config, base_seed.wrapping_add(k)))
        .collect::<Result<Vec<_>>>()?;
    let summaries = Quantity::ALL
        .iter()
        .map(|&q| summarise(q, exact.get(q), &outcomes))
        .collect();
    Ok(TrialStatistics {
        trials,
        base_seed,
        exact,
        outcomes,
        summaries,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Snapshot {
    pub edges_processed: u64,
    pub estimates: TriangleEstimates,
    pub used_slots: usize,
    pub utilization: f64,
    pub elapsed_seconds: f64,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SnapshotSeries {
    pub snapshots: Vec<Snapshot>,
}

/// Positions (edge counts) at which `snapshot_count` evenly spaced
/// snapshots of an `n`-edge stream fall. Strictly increasing; the last is `n`.
pub fn snapshot_points(n: u64, snapshot_count: u64) -> Vec<u64> {
    if n == 0 {
        return vec![0];
    }
    let mut points: Vec<u64> = (1..=snapshot_count)
        .map(|k| (k * n).div_ceil(snapshot_count))
        .collect();
    points.dedup();
    points
}

/// Runs one estimator over `stream`, recording a snapshot at each of
/// `snapshot_count` evenly spaced points and handing it to `on_snapshot`
/// as soon as it is taken.
pub fn track_with<F>(
    stream: &[Hyperedge],
    config: &AlgorithmConfig,
    seed: u64,
    snapshot_count: u64,
    mut on_snapshot: F,
) -> Result<SnapshotSeries>
where
    F: FnMut(&Snapshot) -> Result<()>,
{
    if snapshot_count == 0 {
        return Err(Error::InvalidConfig(
            "snapshot count must be at least 1".into(),
        ));
    }
    let mut est = config.build(seed)?;
    let points = snapshot_points(stream.len() as u64, snapshot_count);
    let mut next = points.iter().peekable();
    let mut series = SnapshotSeries::default();
    let start = Instant::now();

    let mut take = |est: &crate::estimator::AnyEstimator, processed: u64| -> Result<()> {
        let snap = Snapshot {
            edges_processed: processed,
            estimates: *est.estimates(),
            used_slots: est.memory_used(),
            utilization: est.utilization(),
            elapsed_seconds: start.elapsed().as_secs_f64(),
        };
        on_snapshot(&snap)?;
        series.snapshots.push(snap);
        Ok(())
    };

    if next.peek() == Some(&&0) {
        take(&est, 0)?;
        next.next();
    }
    for (i, e) in stream.iter().enumerate() {
        est.process(e);
        let processed = i as u64 + 1;
        if next.peek() == Some(&&processed) {
            take(&est, processed)?;
            next.next();
        }
    }
    Ok(series)
}

pub fn track(
    stream: &[Hyperedge],
    config: &AlgorithmConfig,
    seed: u64,
    snapshot_count: u64,
) -> Result<SnapshotSeries> {
    track_with(stream, config, seed, snapshot_count, |_| Ok(()))
}
