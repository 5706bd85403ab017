//! Single-reservoir estimator.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::correction::{correction_gamma, correction_theta, max_correction, SubsetStats};
use crate::engine::{update_triangles, ConstantCorrections, SampleView};
use crate::error::{Error, Result};
use crate::estimates::TriangleEstimates;
use crate::estimator::Estimator;
use crate::hypergraph::{binom3, Hyperedge};
use crate::reservoir::{Admission, RandomSource, Reservoir};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HtCountConfig {
    /// Memory budget in vertex slots.
    pub budget: usize,
    /// Also count an arrival that the eviction loop removed again. Off by
    /// default: the correction factors assume every counted edge is present.
    pub count_evicted: bool,
}

impl HtCountConfig {
    pub fn new(budget: usize) -> Self {
        HtCountConfig {
            budget,
            count_evicted: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::InvalidConfig(
                "memory budget must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Memory-aware reservoir estimator of hyper-vertex and hyper-edge
/// triangle counts.
#[derive(Debug, Clone)]
pub struct HtCount<R = ChaCha8Rng> {
    reservoir: Reservoir,
    estimates: TriangleEstimates,
    count_evicted: bool,
    rng: R,
}

impl HtCount<ChaCha8Rng> {
    pub fn new(config: HtCountConfig, seed: u64) -> Result<Self> {
        Self::with_rng(config, ChaCha8Rng::seed_from_u64(seed))
    }
}

impl<R: RandomSource> HtCount<R> {
    pub fn with_rng(config: HtCountConfig, rng: R) -> Result<Self> {
        config.validate()?;
        Ok(HtCount {
            reservoir: Reservoir::new(config.budget),
            estimates: TriangleEstimates::default(),
            count_evicted: config.count_evicted,
            rng,
        })
    }

    pub fn reservoir(&self) -> &Reservoir {
        &self.reservoir
    }

    fn count(&mut self, e: &Hyperedge) {
        let observed = self.reservoir.observed();
        let sampled = self.reservoir.len() as u64;
        // θ and γ are only consulted once a pair / triple exists, which
        // needs at least 2 / 3 sampled edges.
        let corrections = ConstantCorrections {
            theta: correction_theta(observed, sampled).unwrap_or(f64::NAN),
            gamma: correction_gamma(observed, sampled).unwrap_or(f64::NAN),
        };
        let view = SampleView::from_subsets([self.reservoir.sample()], e.arrival());
        update_triangles(e, 0, &view, &corrections, &mut self.estimates);
    }
}

impl<R: RandomSource> Estimator for HtCount<R> {
    fn process(&mut self, e: &Hyperedge) -> &TriangleEstimates {
        self.reservoir.observe();
        self.estimates.inner += binom3(e.len() as u64);

        match self.reservoir.sample_hyperedge(e, &mut self.rng) {
            Admission::Admitted => self.count(e),
            // The arrival is no longer in the sample, so the factors below
            // describe a sample that does not contain it.
            Admission::AdmittedThenEvicted if self.count_evicted && self.reservoir.len() >= 2 => {
                self.count(e)
            }
            _ => {}
        }
        debug_assert!(self.reservoir.used() <= self.reservoir.budget());
        &self.estimates
    }

    fn estimates(&self) -> &TriangleEstimates {
        &self.estimates
    }

    fn observed(&self) -> u64 {
        self.reservoir.observed()
    }

    fn sampled(&self) -> usize {
        self.reservoir.len()
    }

    fn memory_used(&self) -> usize {
        self.reservoir.used()
    }

    fn memory_budget(&self) -> usize {
        self.reservoir.budget()
    }

    fn phi(&self, arity: u64) -> f64 {
        max_correction(
            &[SubsetStats::new(
                self.reservoir.observed(),
                self.reservoir.len() as u64,
            )],
            arity,
        )
    }

    fn sampled_arrivals(&self) -> Vec<u64> {
        self.reservoir
            .sample()
            .iter()
            .map(Hyperedge::arrival)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Hypergraph;
    use crate::oracle::exact_count;
    use crate::reservoir::testing::Scripted;

    fn sized(arrival: u64, size: u32) -> Hyperedge {
        let base = arrival as u32 * 1000;
        Hyperedge::new(arrival, base..base + size).unwrap()
    }

    #[test]
    fn rejects_zero_budget() {
        assert!(HtCount::new(HtCountConfig::new(0), 1).is_err());
    }

    #[test]
    fn unsaturated_run_matches_oracle() {
        let h = Hypergraph::from_vertex_lists([vec![1u32, 2, 3], vec![2, 3, 4], vec![3, 4, 5]])
            .unwrap();
        let mut est = HtCount::new(HtCountConfig::new(100), 3).unwrap();
        for e in h.edges() {
            est.process(e);
        }
        let exact = exact_count(&h).unwrap();
        let got = est.estimates();
        assert_eq!(got.inner, exact.inner);
        assert_eq!(got.hybrid, exact.hybrid as f64);
        assert_eq!(got.ttt, exact.ttt as f64);
        assert_eq!(est.phi(2), 1.0);
    }

    #[test]
    fn inner_is_exact_for_a_large_arrival() {
        // 59 inner triangles already counted, then a 15-vertex arrival.
        let mut est = HtCount::with_rng(HtCountConfig::new(1000), Scripted::default()).unwrap();
        // 4 + 4 + 10 + 20 + 20 + 1 = 59
        for (i, s) in [4u32, 4, 5, 6, 6, 3].iter().enumerate() {
            est.process(&sized(i as u64 + 1, *s));
        }
        assert_eq!(est.estimates().inner, 59);
        est.process(&sized(7, 15));
        assert_eq!(est.estimates().inner, 514);
    }

    #[test]
    fn corrections_after_multi_eviction() {
        // Build eight sampled edges on 31 of 32 slots, each sharing vertex 0
        // with the 15-vertex arrival, then force the arrival in with four
        // evictions: m = 9 and |G_s| = 5, so θ = 3.6.
        let sizes = [3u32, 3, 5, 3, 4, 4, 5, 4];
        let mut edges = Vec::new();
        let mut next = 100u32;
        for (i, &s) in sizes.iter().enumerate() {
            let mut vs = vec![0u32, 1];
            vs.extend(next..next + s - 2);
            next += s;
            edges.push(Hyperedge::new(i as u64 + 1, vs).unwrap());
        }
        let mut rng = Scripted::new(&[true], &[0, 1, 2, 3]);
        let mut warm = Scripted::default();
        let mut est = HtCount::with_rng(HtCountConfig::new(32), Scripted::default()).unwrap();
        for e in &edges {
            est.reservoir.observe();
            est.reservoir.sample_hyperedge(e, &mut warm);
        }
        let before = *est.estimates();
        let big = Hyperedge::new(9, [0u32, 1].into_iter().chain(500..513)).unwrap();
        std::mem::swap(&mut est.rng, &mut rng);
        est.process(&big);
        assert_eq!(est.sampled(), 5);
        assert_eq!(est.observed(), 9);
        // Survivors are arrivals 8, 7, 6, 5; each shares {0,1} with the
        // arrival: (|e|+|e_j|-4)·1 hybrid configurations.
        let survivors: Vec<u64> = est.sampled_arrivals();
        assert_eq!(survivors.len(), 5);
        let raw: u64 = edges
            .iter()
            .filter(|e| survivors.contains(&e.arrival()))
            .map(|e| (15 + e.len() - 4) as u64)
            .sum();
        let gained = est.estimates().hybrid - before.hybrid;
        assert!((gained - raw as f64 * 3.6).abs() < 1e-9, "gained {gained}");
        assert!((est.phi(2) - 3.6).abs() < 1e-12);
        assert!((est.phi(3) - 8.4).abs() < 1e-12);
    }

    #[test]
    fn evicted_arrival_is_not_counted_by_default() {
        let cfg = HtCountConfig::new(6);
        let mut est = HtCount::with_rng(cfg, Scripted::new(&[true], &[0, 1])).unwrap();
        est.process(&Hyperedge::new(1, [1u32, 2, 3]).unwrap());
        est.process(&Hyperedge::new(2, [1u32, 2, 4]).unwrap());
        let before = *est.estimates();
        // Arrival 3 replaces index 0, then is evicted itself.
        est.process(&Hyperedge::new(3, [1u32, 2, 4, 5]).unwrap());
        assert_eq!(est.sampled_arrivals(), vec![2]);
        assert_eq!(est.estimates().hybrid, before.hybrid);
        assert_eq!(est.estimates().inner, before.inner + 4);
    }

    #[test]
    fn rejected_arrival_only_moves_inner_and_observed() {
        let mut est =
            HtCount::with_rng(HtCountConfig::new(3), Scripted::new(&[false], &[])).unwrap();
        est.process(&Hyperedge::new(1, [1u32, 2, 3]).unwrap());
        let before = *est.estimates();
        est.process(&Hyperedge::new(2, [1u32, 2, 3]).unwrap());
        assert_eq!(est.observed(), 2);
        assert_eq!(est.sampled(), 1);
        assert_eq!(est.estimates().hybrid, before.hybrid);
        assert_eq!(est.estimates().inner, 2);
    }
}
