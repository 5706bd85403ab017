//! Exact brute-force triangle counts for in-memory hypergraphs.
//!
//! Counts are configuration based: a vertex triple that sits inside two
//! hyperedges contributes two inner triangles, and so on. These are exactly
//! the quantities the streaming estimators target.

use crate::engine::{hybrid_contribution, outer_contribution, TriangleClass};
use crate::error::{Error, Result};
use crate::estimates::ExactCounts;
use crate::hypergraph::{
    binom3, classify_with_shared, intersection_size, triple_intersection_size, Hypergraph,
    InteractionKind,
};

/// Default guard against accidentally cubic runs.
pub const DEFAULT_EDGE_CAP: usize = 10_000;

/// Exact counts with the default edge cap.
pub fn exact_count(h: &Hypergraph) -> Result<ExactCounts> {
    exact_count_with_cap(h, DEFAULT_EDGE_CAP)
}

pub fn exact_count_with_cap(h: &Hypergraph, cap: usize) -> Result<ExactCounts> {
    if h.len() > cap {
        return Err(Error::TooLarge {
            edges: h.len(),
            cap,
        });
    }
    let edges = h.edges();
    let mut counts = ExactCounts::default();

    for e in edges {
        counts.inner += binom3(e.len() as u64);
    }

    // Forward adjacency: for each i, every j > i sharing a vertex with it.
    let neighbours: Vec<Vec<(usize, usize)>> = (0..edges.len())
        .map(|i| {
            (i + 1..edges.len())
                .filter_map(|j| {
                    let shared = intersection_size(&edges[i], &edges[j]);
                    (shared > 0).then_some((j, shared))
                })
                .collect()
        })
        .collect();

    for (i, adj) in neighbours.iter().enumerate() {
        let e_i = &edges[i];
        for (pos, &(j, i_ij)) in adj.iter().enumerate() {
            let e_j = &edges[j];
            counts.hybrid += hybrid_contribution(e_i.len(), e_j.len(), i_ij);

            for &(k, i_ik) in &adj[pos + 1..] {
                let e_k = &edges[k];
                let i_jk = intersection_size(e_j, e_k);
                if i_jk == 0 {
                    continue;
                }
                let core = triple_intersection_size(e_i, e_j, e_k);
                counts.outer += outer_contribution(i_ij, i_ik, i_jk, core);

                let inclusions = [
                    classify_with_shared(e_i.len(), e_j.len(), i_ij),
                    classify_with_shared(e_i.len(), e_k.len(), i_ik),
                    classify_with_shared(e_j.len(), e_k.len(), i_jk),
                ]
                .iter()
                .filter(|p| p.kind == InteractionKind::Inclusion)
                .count();
                match TriangleClass::from_inclusions(inclusions) {
                    TriangleClass::Ccc => counts.ccc += 1,
                    TriangleClass::Tcc => counts.tcc += 1,
                    TriangleClass::Ttc => counts.ttc += 1,
                    TriangleClass::Ttt => counts.ttt += 1,
                }
            }
        }
    }
    Ok(counts)
}
