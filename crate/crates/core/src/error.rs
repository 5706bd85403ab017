use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("invalid hyperedge: {0}")]
    InvalidHyperedge(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("hypergraph has {edges} edges, above the exact-count cap of {cap}")]
    TooLarge { edges: usize, cap: usize },

    /// A correction factor or bound was requested for fewer sampled edges
    /// than the pattern needs.
    #[error("need at least {needed} sampled hyperedges, have {have}")]
    Arity { needed: u64, have: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
