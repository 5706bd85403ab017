//! Seeded synthetic hypergraph streams.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hypergraph::{Hyperedge, Hypergraph};

fn check_sizes(min_size: usize, max_size: usize, universe: u32) -> Result<()> {
    if min_size == 0 || min_size > max_size {
        return Err(Error::InvalidConfig(format!(
            "edge sizes must satisfy 1 <= min <= max, got {min_size}..={max_size}"
        )));
    }
    if max_size > universe as usize {
        return Err(Error::InvalidConfig(format!(
            "edge size {max_size} exceeds the vertex universe {universe}"
        )));
    }
    Ok(())
}

fn build<R: Rng>(
    edges: usize,
    universe: u32,
    rng: &mut R,
    mut size: impl FnMut(&mut R) -> usize,
) -> Result<Hypergraph> {
    let list = (1..=edges as u64)
        .map(|arrival| {
            let k = size(rng);
            let vs = index::sample(rng, universe as usize, k)
                .into_iter()
                .map(|v| v as u32);
            Hyperedge::new(arrival, vs)
        })
        .collect::<Result<Vec<_>>>()?;
    Hypergraph::new(list)
}

/// `edges` hyperedges whose sizes are uniform on `min_size..=max_size` and
/// whose vertices are uniform without replacement from `0..universe`.
pub fn uniform_sizes_stream(
    edges: usize,
    min_size: usize,
    max_size: usize,
    universe: u32,
    seed: u64,
) -> Result<Hypergraph> {
    check_sizes(min_size, max_size, universe)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    build(edges, universe, &mut rng, |r| {
        r.random_range(min_size..=max_size)
    })
}

/// Like [`uniform_sizes_stream`], but sizes follow a truncated power law:
/// P(size = s) ∝ (s − min_size + 1)^(−exponent).
pub fn zipf_sizes_stream(
    edges: usize,
    min_size: usize,
    max_size: usize,
    exponent: f64,
    universe: u32,
    seed: u64,
) -> Result<Hypergraph> {
    check_sizes(min_size, max_size, universe)?;
    if !(exponent.is_finite() && exponent >= 0.0) {
        return Err(Error::InvalidConfig(format!("bad exponent {exponent}")));
    }
    let weights = (1..=max_size - min_size + 1).map(|r| (r as f64).powf(-exponent));
    let dist = WeightedIndex::new(weights).map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    build(edges, universe, &mut rng, |r| min_size + dist.sample(r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_stream_shape() {
        let h = uniform_sizes_stream(300, 2, 10, 60, 7).unwrap();
        assert_eq!(h.len(), 300);
        assert!(h.edges().iter().all(|e| (2..=10).contains(&e.len())));
        assert!(h
            .edges()
            .iter()
            .flat_map(|e| e.vertices())
            .all(|v| v.0 < 60));
        assert_eq!(h, uniform_sizes_stream(300, 2, 10, 60, 7).unwrap());
        assert_ne!(h, uniform_sizes_stream(300, 2, 10, 60, 8).unwrap());
    }

    #[test]
    fn zipf_sizes_are_heavy_tailed() {
        let h = zipf_sizes_stream(5000, 2, 200, 1.5, 10_000, 1).unwrap();
        let sizes: Vec<usize> = h.edges().iter().map(|e| e.len()).collect();
        assert!(sizes.iter().all(|s| (2..=200).contains(s)));
        let small = sizes.iter().filter(|&&s| s <= 3).count();
        let large = sizes.iter().filter(|&&s| s >= 50).count();
        assert!(small > sizes.len() / 2, "small = {small}");
        assert!(large > 0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(uniform_sizes_stream(10, 0, 3, 10, 0).is_err());
        assert!(uniform_sizes_stream(10, 4, 3, 10, 0).is_err());
        assert!(uniform_sizes_stream(10, 2, 30, 10, 0).is_err());
        assert!(zipf_sizes_stream(10, 2, 5, f64::NAN, 10, 0).is_err());
    }
}
