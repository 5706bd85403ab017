//! With a budget that holds the whole stream, both estimators are exact.

mod common;

use hypertri::{exact_count, AlgorithmConfig, Estimator, Routing, TriangleEstimates};
use proptest::prelude::*;

fn run(config: AlgorithmConfig, h: &hypertri::Hypergraph, seed: u64) -> TriangleEstimates {
    let mut est = config.build(seed).unwrap();
    for e in h.edges() {
        est.process(e);
    }
    *est.estimates()
}

fn as_estimates(c: hypertri::ExactCounts) -> TriangleEstimates {
    TriangleEstimates {
        inner: c.inner,
        hybrid: c.hybrid as f64,
        outer: c.outer as f64,
        ccc: c.ccc as f64,
        tcc: c.tcc as f64,
        ttc: c.ttc as f64,
        ttt: c.ttt as f64,
    }
}

#[test]
fn unsaturated_estimators_reproduce_exact_counts() {
    for seed in 0..200 {
        let h = common::random_hypergraph(seed, 15, 10, 6);
        let budget = h.total_slots().max(1);
        let want = as_estimates(exact_count(&h).unwrap());
        for config in [
            AlgorithmConfig::htcount(budget),
            AlgorithmConfig::htcount_p(budget),
            AlgorithmConfig::htcount_p(budget).with_routing(Routing::BelowMean),
        ] {
            assert_eq!(run(config, &h, seed), want, "seed {seed}, {config:?}");
        }
    }
}

proptest! {
    #[test]
    fn unsaturated_estimate_ignores_order(seed in 0u64..10_000, shift in 0usize..15) {
        let h = common::random_hypergraph(seed, 15, 10, 6);
        let n = h.len().max(1);
        let order: Vec<usize> = (0..h.len()).map(|i| (i + shift) % n).collect();
        let budget = h.total_slots().max(1);
        let a = run(AlgorithmConfig::htcount(budget), &h, 1);
        let b = run(AlgorithmConfig::htcount(budget), &h.permuted(&order).unwrap(), 2);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn memory_never_exceeds_budget(seed in 0u64..10_000, budget in 1usize..40, partitioned: bool) {
        let h = common::random_hypergraph(seed, 40, 30, 12);
        let config = if partitioned {
            AlgorithmConfig::htcount_p(budget).with_tau(0.9)
        } else {
            AlgorithmConfig::htcount(budget)
        };
        let mut est = config.build(seed).unwrap();
        let mut last = TriangleEstimates::default();
        for e in h.edges() {
            est.process(e);
            prop_assert!(est.memory_used() <= budget);
            prop_assert!(est.estimates().is_valid());
            prop_assert!(est.estimates().dominates(&last));
            last = *est.estimates();
        }
    }
}
