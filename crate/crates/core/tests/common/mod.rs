#![allow(dead_code)]

use hypertri::Hypergraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random small hypergraph: up to `max_edges` edges of size
/// `1..=max_size` over vertices `0..universe`.
pub fn random_hypergraph(
    seed: u64,
    max_edges: usize,
    universe: u32,
    max_size: usize,
) -> Hypergraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(0..=max_edges);
    let lists: Vec<Vec<u32>> = (0..n)
        .map(|_| {
            let k = rng.random_range(1..=max_size.min(universe as usize));
            rand::seq::index::sample(&mut rng, universe as usize, k)
                .into_iter()
                .map(|v| v as u32)
                .collect()
        })
        .collect();
    Hypergraph::from_vertex_lists(lists).unwrap()
}
