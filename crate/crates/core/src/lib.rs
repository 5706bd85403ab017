//! Estimating hyper-vertex and hyper-edge triangle counts over hypergraph
//! streams within a fixed memory budget.
//!
//! [`HtCount`] keeps one memory-aware reservoir; [`HtCountP`] splits unused
//! memory into extra reservoirs when utilization drops. [`exact_count`] is
//! the brute-force reference and [`bench`] holds the trial harness.

pub mod bench;
pub mod cli;
pub mod correction;
pub mod engine;
pub mod error;
pub mod estimates;
pub mod estimator;
pub mod htcount;
pub mod hypergraph;
pub mod oracle;
pub mod partition;
pub mod report;
pub mod reservoir;
pub mod stream;
pub mod synthetic;

pub use error::{Error, Result};
pub use estimates::{ExactCounts, Quantity, TriangleEstimates};
pub use estimator::{AlgorithmConfig, AlgorithmKind, AnyEstimator, Estimator};
pub use htcount::{HtCount, HtCountConfig};
pub use hypergraph::{Hyperedge, Hypergraph, VertexId};
pub use oracle::exact_count;
pub use partition::{HtCountP, HtCountPConfig, Routing};
