//! Common interface over the streaming estimators, and a config type that
//! builds either one.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimates::TriangleEstimates;
use crate::htcount::{HtCount, HtCountConfig};
use crate::hypergraph::Hyperedge;
use crate::partition::{HtCountP, HtCountPConfig, Routing};

/// A one-pass triangle-count estimator over a hyperedge stream.
pub trait Estimator {
    /// Consumes the next stream element and returns the running estimates.
    fn process(&mut self, e: &Hyperedge) -> &TriangleEstimates;

    fn estimates(&self) -> &TriangleEstimates;

    /// Stream elements consumed so far.
    fn observed(&self) -> u64;

    /// Hyperedges currently held, across all subsets.
    fn sampled(&self) -> usize;

    /// Vertex slots currently held, across all subsets.
    fn memory_used(&self) -> usize;

    /// Total vertex-slot budget.
    fn memory_budget(&self) -> usize;

    /// Largest correction factor any `arity` sampled edges could receive at
    /// the current state (θ for 2, γ for 3; across subsets when
    /// partitioned). NaN when fewer than `arity` edges are sampled.
    fn phi(&self, arity: u64) -> f64;

    /// Arrival indexes of every currently sampled hyperedge.
    fn sampled_arrivals(&self) -> Vec<u64>;

    fn utilization(&self) -> f64 {
        crate::bench::memory_utilization(self.memory_used(), self.memory_budget())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgorithmKind {
    HtCount,
    HtCountP,
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlgorithmKind::HtCount => "htcount",
            AlgorithmKind::HtCountP => "htcount-p",
        })
    }
}

impl FromStr for AlgorithmKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "htcount" => Ok(AlgorithmKind::HtCount),
            "htcount-p" => Ok(AlgorithmKind::HtCountP),
            other => Err(Error::InvalidConfig(format!("unknown algorithm '{other}'"))),
        }
    }
}

/// Everything needed to build an estimator, minus the seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgorithmConfig {
    pub kind: AlgorithmKind,
    pub budget: usize,
    /// Utilization threshold τ (partitioned only).
    pub tau: f64,
    /// Maximum number of subsets N (partitioned only).
    pub max_subsets: usize,
    pub routing: Routing,
    pub count_evicted: bool,
}

impl AlgorithmConfig {
    pub fn htcount(budget: usize) -> Self {
        AlgorithmConfig {
            kind: AlgorithmKind::HtCount,
            budget,
            tau: crate::partition::default_tau(budget),
            max_subsets: crate::partition::DEFAULT_MAX_SUBSETS,
            routing: Routing::default(),
            count_evicted: false,
        }
    }

    pub fn htcount_p(budget: usize) -> Self {
        AlgorithmConfig {
            kind: AlgorithmKind::HtCountP,
            ..Self::htcount(budget)
        }
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        self.tau = tau;
        self
    }

    pub fn with_max_subsets(mut self, n: usize) -> Self {
        self.max_subsets = n;
        self
    }

    pub fn with_routing(mut self, routing: Routing) -> Self {
        self.routing = routing;
        self
    }

    pub fn build(&self, seed: u64) -> Result<AnyEstimator> {
        Ok(match self.kind {
            AlgorithmKind::HtCount => AnyEstimator::HtCount(HtCount::new(
                HtCountConfig {
                    budget: self.budget,
                    count_evicted: self.count_evicted,
                },
                seed,
            )?),
            AlgorithmKind::HtCountP => AnyEstimator::HtCountP(HtCountP::new(
                HtCountPConfig {
                    budget: self.budget,
                    tau: self.tau,
                    max_subsets: self.max_subsets,
                    routing: self.routing,
                },
                seed,
            )?),
        })
    }
}

/// Either estimator behind one concrete type.
#[derive(Debug, Clone)]
pub enum AnyEstimator {
    HtCount(HtCount),
    HtCountP(HtCountP),
}

macro_rules! delegate {
    ($self:ident, $e:ident => $body:expr) => {
        match $self {
            AnyEstimator::HtCount($e) => $body,
            AnyEstimator::HtCountP($e) => $body,
        }
    };
}

impl Estimator for AnyEstimator {
    fn process(&mut self, e: &Hyperedge) -> &TriangleEstimates {
        delegate!(self, x => x.process(e))
    }
    fn estimates(&self) -> &TriangleEstimates {
        delegate!(self, x => x.estimates())
    }
    fn observed(&self) -> u64 {
        delegate!(self, x => x.observed())
    }
    fn sampled(&self) -> usize {
        delegate!(self, x => x.sampled())
    }
    fn memory_used(&self) -> usize {
        delegate!(self, x => x.memory_used())
    }
    fn memory_budget(&self) -> usize {
        delegate!(self, x => x.memory_budget())
    }
    fn phi(&self, arity: u64) -> f64 {
        delegate!(self, x => x.phi(arity))
    }
    fn sampled_arrivals(&self) -> Vec<u64> {
        delegate!(self, x => x.sampled_arrivals())
    }
}
