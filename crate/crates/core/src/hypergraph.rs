//! Hyperedges, hypergraphs and the set primitives shared by the exact
//! counter and the streaming estimators.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vertex identifier. Stored as a 32-bit integer, which is also the unit
/// of the memory budget (one vertex slot).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl From<u32> for VertexId {
    fn from(v: u32) -> Self {
        VertexId(v)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// One element of a hypergraph stream: a non-empty set of distinct vertices
/// tagged with its 1-based arrival position.
///
/// Vertices are kept sorted and deduplicated so that intersections are a
/// linear merge.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Hyperedge {
    arrival: u64,
    vertices: Vec<VertexId>,
}

impl Hyperedge {
    /// Builds a hyperedge, sorting and deduplicating `vertices`.
    pub fn new<I, V>(arrival: u64, vertices: I) -> Result<Self>
    where
        I: IntoIterator<Item = V>,
        V: Into<VertexId>,
    {
        Ok(Self::new_reporting_duplicates(arrival, vertices)?.0)
    }

    /// Like [`Hyperedge::new`], also returning how many duplicate vertex ids
    /// were dropped.
    pub fn new_reporting_duplicates<I, V>(arrival: u64, vertices: I) -> Result<(Self, usize)>
    where
        I: IntoIterator<Item = V>,
        V: Into<VertexId>,
    {
        if arrival == 0 {
            return Err(Error::InvalidHyperedge(
                "arrival index is 1-based; got 0".into(),
            ));
        }
        let mut vertices: Vec<VertexId> = vertices.into_iter().map(Into::into).collect();
        let raw = vertices.len();
        vertices.sort_unstable();
        vertices.dedup();
        if vertices.is_empty() {
            return Err(Error::InvalidHyperedge(format!(
                "hyperedge {arrival} has no vertices"
            )));
        }
        let dropped = raw - vertices.len();
        Ok((Hyperedge { arrival, vertices }, dropped))
    }

    pub fn arrival(&self) -> u64 {
        self.arrival
    }

    /// Sorted, duplicate-free vertex list.
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    /// Number of vertices, |e|. Also the number of memory slots the edge uses.
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    /// Always false; present for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Same vertex set with a different arrival index.
    pub fn with_arrival(&self, arrival: u64) -> Result<Self> {
        Hyperedge::new(arrival, self.vertices.iter().copied())
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }
}

impl fmt::Display for Hyperedge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

/// A finite hypergraph held in arrival order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Hypergraph {
    edges: Vec<Hyperedge>,
}

impl Hypergraph {
    /// Wraps `edges`, checking that edge `i` (0-based) has arrival `i + 1`.
    pub fn new(edges: Vec<Hyperedge>) -> Result<Self> {
        for (i, e) in edges.iter().enumerate() {
            if e.arrival() != i as u64 + 1 {
                return Err(Error::InvalidHyperedge(format!(
                    "edge at position {} has arrival index {}",
                    i + 1,
                    e.arrival()
                )));
            }
        }
        Ok(Hypergraph { edges })
    }

    /// Builds a hypergraph from raw vertex lists, assigning arrivals 1..=n.
    pub fn from_vertex_lists<L, V>(lists: L) -> Result<Self>
    where
        L: IntoIterator,
        L::Item: IntoIterator<Item = V>,
        V: Into<VertexId>,
    {
        let edges = lists
            .into_iter()
            .enumerate()
            .map(|(i, vs)| Hyperedge::new(i as u64 + 1, vs))
            .collect::<Result<Vec<_>>>()?;
        Ok(Hypergraph { edges })
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Σ |e| over all edges: the budget at which no sampling ever happens.
    pub fn total_slots(&self) -> usize {
        self.edges.iter().map(Hyperedge::len).sum()
    }

    /// Reorders the stream, renumbering arrivals to match the new order.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let edges = order
            .iter()
            .enumerate()
            .map(|(i, &src)| self.edges[src].with_arrival(i as u64 + 1))
            .collect::<Result<Vec<_>>>()?;
        Hypergraph::new(edges)
    }
}

/// How two hyperedges interact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InteractionKind {
    /// No shared vertex.
    Disjoint,
    /// Shared vertices, neither contains the other (T).
    Intersection,
    /// One vertex set contains the other, equality included (C).
    Inclusion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PairInteraction {
    pub kind: InteractionKind,
    pub shared: usize,
}

/// |a ∩ b| by merging the two sorted vertex lists.
pub fn intersection_size(a: &Hyperedge, b: &Hyperedge) -> usize {
    let (xs, ys) = (a.vertices(), b.vertices());
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < xs.len() && j < ys.len() {
        match xs[i].cmp(&ys[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// |a ∩ b ∩ c| by a three-way merge.
pub fn triple_intersection_size(a: &Hyperedge, b: &Hyperedge, c: &Hyperedge) -> usize {
    let (xs, ys, zs) = (a.vertices(), b.vertices(), c.vertices());
    let (mut i, mut j, mut k, mut n) = (0, 0, 0, 0);
    while i < xs.len() && j < ys.len() && k < zs.len() {
        let (x, y, z) = (xs[i], ys[j], zs[k]);
        if x == y && y == z {
            n += 1;
            i += 1;
            j += 1;
            k += 1;
        } else {
            let hi = x.max(y).max(z);
            if x < hi {
                i += 1;
            }
            if y < hi {
                j += 1;
            }
            if z < hi {
                k += 1;
            }
        }
    }
    n
}

/// Classifies a pair from its intersection size. Split out so callers that
/// already hold `shared` skip the merge.
pub fn classify_with_shared(len_a: usize, len_b: usize, shared: usize) -> PairInteraction {
    let kind = if shared == 0 {
        InteractionKind::Disjoint
    } else if shared == len_a.min(len_b) {
        InteractionKind::Inclusion
    } else {
        InteractionKind::Intersection
    };
    PairInteraction { kind, shared }
}

pub fn classify_pair(a: &Hyperedge, b: &Hyperedge) -> PairInteraction {
    classify_with_shared(a.len(), b.len(), intersection_size(a, b))
}

/// C(n, 3): the number of inner triangles in an edge of size n.
pub fn binom3(n: u64) -> u64 {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}
