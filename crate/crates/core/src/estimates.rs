use serde::{Deserialize, Serialize};

/// Running triangle-count estimates.
///
/// `inner` is counted exactly and is never scaled; every other field is a
/// sum of correction-weighted contributions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct TriangleEstimates {
    pub inner: u64,
    pub hybrid: f64,
    pub outer: f64,
    pub ccc: f64,
    pub tcc: f64,
    pub ttc: f64,
    pub ttt: f64,
}

/// The seven reported quantities, in output order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    Inner,
    Hybrid,
    Outer,
    Ccc,
    Tcc,
    Ttc,
    Ttt,
}

impl Quantity {
    pub const ALL: [Quantity; 7] = [
        Quantity::Inner,
        Quantity::Hybrid,
        Quantity::Outer,
        Quantity::Ccc,
        Quantity::Tcc,
        Quantity::Ttc,
        Quantity::Ttt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Inner => "inner",
            Quantity::Hybrid => "hybrid",
            Quantity::Outer => "outer",
            Quantity::Ccc => "ccc",
            Quantity::Tcc => "tcc",
            Quantity::Ttc => "ttc",
            Quantity::Ttt => "ttt",
        }
    }

    /// Number of hyperedges a counted configuration spans; selects which
    /// correction factor (and variance bound) applies.
    pub fn arity(self) -> usize {
        match self {
            Quantity::Inner => 1,
            Quantity::Hybrid => 2,
            _ => 3,
        }
    }
}

impl TriangleEstimates {
    pub fn get(&self, q: Quantity) -> f64 {
        match q {
            Quantity::Inner => self.inner as f64,
            Quantity::Hybrid => self.hybrid,
            Quantity::Outer => self.outer,
            Quantity::Ccc => self.ccc,
            Quantity::Tcc => self.tcc,
            Quantity::Ttc => self.ttc,
            Quantity::Ttt => self.ttt,
        }
    }

    /// True when every field is finite and non-negative.
    pub fn is_valid(&self) -> bool {
        Quantity::ALL
            .iter()
            .all(|&q| self.get(q).is_finite() && self.get(q) >= 0.0)
    }

    /// Field-wise `self >= earlier`.
    pub fn dominates(&self, earlier: &TriangleEstimates) -> bool {
        Quantity::ALL.iter().all(|&q| self.get(q) >= earlier.get(q))
    }
}

/// Exact triangle counts from the brute-force counter.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactCounts {
    pub inner: u64,
    pub hybrid: u64,
    pub outer: u64,
    pub ccc: u64,
    pub tcc: u64,
    pub ttc: u64,
    pub ttt: u64,
}

impl ExactCounts {
    pub fn get(&self, q: Quantity) -> u64 {
        match q {
            Quantity::Inner => self.inner,
            Quantity::Hybrid => self.hybrid,
            Quantity::Outer => self.outer,
            Quantity::Ccc => self.ccc,
            Quantity::Tcc => self.tcc,
            Quantity::Ttc => self.ttc,
            Quantity::Ttt => self.ttt,
        }
    }

    /// Number of edge triples with all three pairwise intersections non-empty.
    pub fn class_total(&self) -> u64 {
        self.ccc + self.tcc + self.ttc + self.ttt
    }
}
