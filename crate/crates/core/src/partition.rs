//! Partitioned estimator: the budget is split into up to `N` independent
//! reservoirs that are created on demand.
//!
//! Whenever overall utilization drops below τ (typically after a large edge
//! forced many evictions), every existing subset is frozen at its current
//! occupancy and the stranded slots become a new subset. Arrivals are routed
//! to one subset each; pairs and triples of sampled edges are corrected with
//! the joint inclusion probability of the subsets they were sampled into.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::correction::{joint_correction, joint_probability, max_correction, SubsetStats};
use crate::engine::{update_triangles, Corrections, SampleView, SubsetTag};
use crate::error::{Error, Result};
use crate::estimates::TriangleEstimates;
use crate::estimator::Estimator;
use crate::hypergraph::{binom3, Hyperedge};
use crate::reservoir::{RandomSource, Reservoir};

pub const DEFAULT_MAX_SUBSETS: usize = 10;

/// τ by budget: 0.85 below 2^12 slots, then 0.9, 0.95, 0.975 for each
/// following pair of doublings, and 0.99 from 2^18 up.
pub fn default_tau(budget: usize) -> f64 {
    match budget {
        0..4096 => 0.85,
        4096..16384 => 0.9,
        16384..65536 => 0.95,
        65536..262144 => 0.975,
        _ => 0.99,
    }
}

/// When to keep routing arrivals to the newest subset instead of drawing
/// a subset by allocation weight.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Routing {
    /// While the newest subset's inclusion probability |G_s|/m is above the
    /// mean of the older subsets', i.e. until it has caught up with them.
    #[default]
    CatchUp,
    /// While the newest subset's inclusion probability is below that mean.
    BelowMean,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HtCountPConfig {
    /// Total memory budget M in vertex slots.
    pub budget: usize,
    /// Utilization threshold τ ∈ (0, 1].
    pub tau: f64,
    /// Maximum number of subsets N ≥ 1.
    pub max_subsets: usize,
    pub routing: Routing,
}

impl HtCountPConfig {
    pub fn new(budget: usize) -> Self {
        HtCountPConfig {
            budget,
            tau: default_tau(budget),
            max_subsets: DEFAULT_MAX_SUBSETS,
            routing: Routing::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.budget == 0 {
            return Err(Error::InvalidConfig(
                "memory budget must be at least 1".into(),
            ));
        }
        if !(self.tau > 0.0 && self.tau <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "tau must lie in (0, 1], got {}",
                self.tau
            )));
        }
        if self.max_subsets == 0 {
            return Err(Error::InvalidConfig(
                "max subsets must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Partitioned memory-aware estimator.
#[derive(Debug, Clone)]
pub struct HtCountP<R = ChaCha8Rng> {
    subsets: Vec<Reservoir>,
    config: HtCountPConfig,
    can_extend: bool,
    estimates: TriangleEstimates,
    rng: R,
}

impl HtCountP<ChaCha8Rng> {
    pub fn new(config: HtCountPConfig, seed: u64) -> Result<Self> {
        Self::with_rng(config, ChaCha8Rng::seed_from_u64(seed))
    }
}

fn inclusion_rate(r: &Reservoir) -> f64 {
    if r.observed() == 0 {
        1.0
    } else {
        r.len() as f64 / r.observed() as f64
    }
}

impl<R: RandomSource> HtCountP<R> {
    pub fn with_rng(config: HtCountPConfig, rng: R) -> Result<Self> {
        config.validate()?;
        Ok(HtCountP {
            subsets: vec![Reservoir::new(config.budget)],
            config,
            can_extend: true,
            estimates: TriangleEstimates::default(),
            rng,
        })
    }

    /// Active subsets, oldest first.
    pub fn subsets(&self) -> &[Reservoir] {
        &self.subsets
    }

    /// Current slot allocation of each active subset.
    pub fn allocations(&self) -> Vec<usize> {
        self.subsets.iter().map(Reservoir::budget).collect()
    }

    pub fn can_extend(&self) -> bool {
        self.can_extend
    }

    fn stats(&self) -> Vec<SubsetStats> {
        self.subsets
            .iter()
            .map(|s| SubsetStats::new(s.observed(), s.len() as u64))
            .collect()
    }

    /// Opens a new subset when utilization has fallen below τ. Returns
    /// whether one was created.
    pub fn maybe_extend(&mut self) -> bool {
        let newest = self.subsets.last().expect("at least one subset");
        let used: usize = self.subsets.iter().map(Reservoir::used).sum();
        let utilization = used as f64 / self.config.budget as f64;
        if self.subsets.len() >= self.config.max_subsets
            || !self.can_extend
            || newest.observed() <= newest.len() as u64
            || utilization >= self.config.tau
        {
            return false;
        }
        for s in &mut self.subsets {
            let occupied = s.used();
            s.set_budget(occupied);
        }
        self.subsets.push(Reservoir::new(self.config.budget - used));
        self.can_extend = false;
        true
    }

    /// Picks the subset (0-based) for the next arrival.
    pub fn route(&mut self) -> usize {
        let newest = self.subsets.len() - 1;
        if newest == 0 {
            return 0;
        }
        let rate = inclusion_rate(&self.subsets[newest]);
        let older_mean = self.subsets[..newest]
            .iter()
            .map(inclusion_rate)
            .sum::<f64>()
            / newest as f64;
        let stay = match self.config.routing {
            Routing::CatchUp => rate > older_mean,
            Routing::BelowMean => rate < older_mean,
        };
        if stay {
            return newest;
        }
        let weights: Vec<u64> = self.subsets.iter().map(|s| s.budget() as u64).collect();
        self.can_extend = true;
        self.rng.weighted_index(&weights)
    }

    /// Probability that one sampled edge from subset `x` and one from `y`
    /// are both present (two distinct edges when `x == y`).
    pub fn pair_probability(&self, x: usize, y: usize) -> Result<f64> {
        let s = self.stats();
        check_tags(&s, &[x, y])?;
        joint_probability(&pair_groups(&s, x, y))
    }

    /// Probability that three distinct sampled edges from subsets `x`, `y`,
    /// `z` are all present.
    pub fn triple_probability(&self, x: usize, y: usize, z: usize) -> Result<f64> {
        let s = self.stats();
        check_tags(&s, &[x, y, z])?;
        joint_probability(triple_groups(&s, x, y, z).as_slice())
    }
}

fn check_tags(stats: &[SubsetStats], tags: &[usize]) -> Result<()> {
    match tags.iter().find(|&&t| t >= stats.len()) {
        Some(t) => Err(Error::InvalidConfig(format!(
            "subset {t} is not active ({} active)",
            stats.len()
        ))),
        None => Ok(()),
    }
}

fn pair_groups(s: &[SubsetStats], x: usize, y: usize) -> Vec<(SubsetStats, u64)> {
    if x == y {
        vec![(s[x], 2)]
    } else {
        vec![(s[x], 1), (s[y], 1)]
    }
}

struct Groups {
    items: [(SubsetStats, u64); 3],
    len: usize,
}

impl Groups {
    fn as_slice(&self) -> &[(SubsetStats, u64)] {
        &self.items[..self.len]
    }
}

fn triple_groups(s: &[SubsetStats], x: usize, y: usize, z: usize) -> Groups {
    let mut t = [x, y, z];
    t.sort_unstable();
    let [a, b, c] = t;
    let filler = (s[a], 0);
    let (items, len) = if a == c {
        ([(s[a], 3), filler, filler], 1)
    } else if a == b {
        ([(s[a], 2), (s[c], 1), filler], 2)
    } else if b == c {
        ([(s[a], 1), (s[b], 2), filler], 2)
    } else {
        ([(s[a], 1), (s[b], 1), (s[c], 1)], 3)
    };
    Groups { items, len }
}

/// Correction factors from a snapshot of every subset's (m, |G_s|).
struct PartitionCorrections {
    stats: Vec<SubsetStats>,
}

impl Corrections for PartitionCorrections {
    fn pair(&self, new: SubsetTag, other: SubsetTag) -> f64 {
        let groups = if new == other {
            [(self.stats[new], 2), (self.stats[new], 0)]
        } else {
            [(self.stats[new], 1), (self.stats[other], 1)]
        };
        joint_correction(&groups).expect("both edges of a counted pair are sampled")
    }

    fn triple(&self, new: SubsetTag, a: SubsetTag, b: SubsetTag) -> f64 {
        joint_correction(triple_groups(&self.stats, new, a, b).as_slice())
            .expect("all edges of a counted triple are sampled")
    }
}

impl<R: RandomSource> Estimator for HtCountP<R> {
    fn process(&mut self, e: &Hyperedge) -> &TriangleEstimates {
        self.maybe_extend();
        let p = self.route();
        let subset = &mut self.subsets[p];
        subset.observe();
        self.estimates.inner += binom3(e.len() as u64);

        if subset.sample_hyperedge(e, &mut self.rng).survived() {
            let corrections = PartitionCorrections {
                stats: self.stats(),
            };
            let view =
                SampleView::from_subsets(self.subsets.iter().map(Reservoir::sample), e.arrival());
            update_triangles(e, p, &view, &corrections, &mut self.estimates);
        }
        debug_assert!(self.memory_used() <= self.config.budget);
        &self.estimates
    }

    fn estimates(&self) -> &TriangleEstimates {
        &self.estimates
    }

    fn observed(&self) -> u64 {
        self.subsets.iter().map(Reservoir::observed).sum()
    }

    fn sampled(&self) -> usize {
        self.subsets.iter().map(Reservoir::len).sum()
    }

    fn memory_used(&self) -> usize {
        self.subsets.iter().map(Reservoir::used).sum()
    }

    fn memory_budget(&self) -> usize {
        self.config.budget
    }

    fn phi(&self, arity: u64) -> f64 {
        max_correction(&self.stats(), arity)
    }

    fn sampled_arrivals(&self) -> Vec<u64> {
        self.subsets
            .iter()
            .flat_map(|s| s.sample().iter().map(Hyperedge::arrival))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::htcount::{HtCount, HtCountConfig};
    use crate::reservoir::testing::Scripted;
    use approx::assert_relative_eq;

    fn sized(arrival: u64, size: u32) -> Hyperedge {
        let base = arrival as u32 * 1000;
        Hyperedge::new(arrival, base..base + size).unwrap()
    }

    fn cfg(budget: usize, tau: f64) -> HtCountPConfig {
        HtCountPConfig {
            budget,
            tau,
            max_subsets: DEFAULT_MAX_SUBSETS,
            routing: Routing::CatchUp,
        }
    }

    #[test]
    fn default_tau_schedule() {
        assert_eq!(default_tau(256), 0.85);
        assert_eq!(default_tau(4096), 0.9);
        assert_eq!(default_tau(8192), 0.9);
        assert_eq!(default_tau(16383), 0.9);
        assert_eq!(default_tau(16384), 0.95);
        assert_eq!(default_tau(1 << 17), 0.975);
        assert_eq!(default_tau(1 << 20), 0.99);
    }

    #[test]
    fn config_validation() {
        assert!(HtCountP::new(cfg(0, 0.9), 0).is_err());
        assert!(HtCountP::new(cfg(10, 0.0), 0).is_err());
        assert!(HtCountP::new(cfg(10, 1.5), 0).is_err());
        assert!(HtCountP::new(cfg(10, 1.0), 0).is_ok());
        let mut c = cfg(10, 0.5);
        c.max_subsets = 0;
        assert!(HtCountP::new(c, 0).is_err());
    }

    /// Drives subset 1 to 22 of 32 slots after having thinned once.
    fn thinned_to_22() -> HtCountP<Scripted> {
        let mut est = HtCountP::with_rng(cfg(32, 0.7), Scripted::default()).unwrap();
        // 8 + 8 + 8 + 8 = 32 slots, all taken outright.
        for a in 1..=4 {
            est.process(&sized(a, 8));
        }
        // A 6-slot arrival: coin succeeds, replaces index 0 (8 slots) → 30,
        // nothing else evicted. Then a 2-slot arrival replaces index 0 → 24,
        // and another 6-slot arrival replaces an 8 → 22.
        est.rng = Scripted::new(&[true, true, true], &[0, 0, 1]);
        est.process(&sized(5, 6));
        est.process(&sized(6, 2));
        est.process(&sized(7, 6));
        est
    }

    #[test]
    fn extension_splits_stranded_memory() {
        let mut est = thinned_to_22();
        assert_eq!(est.memory_used(), 22);
        assert_eq!(est.subsets().len(), 1);
        assert!(est.maybe_extend());
        assert_eq!(est.allocations(), vec![22, 10]);
        assert!(!est.can_extend());
        // can_extend is now false: no second split.
        assert!(!est.maybe_extend());
    }

    #[test]
    fn no_extension_above_threshold_or_at_cap() {
        let mut est = HtCountP::with_rng(cfg(32, 0.5), Scripted::default()).unwrap();
        est.process(&sized(1, 30));
        assert!(!est.maybe_extend());

        let mut est = thinned_to_22();
        est.config.max_subsets = 1;
        assert!(!est.maybe_extend());

        // Utilization 22/32 = 0.6875 is not below τ = 0.6.
        let mut est = thinned_to_22();
        est.config.tau = 0.6;
        assert!(!est.maybe_extend());
    }

    #[test]
    fn single_subset_routes_without_randomness() {
        let mut est = HtCountP::with_rng(cfg(32, 0.7), Scripted::default()).unwrap();
        assert_eq!(est.route(), 0);
    }

    #[test]
    fn catch_up_routes_to_fresh_subset() {
        let mut est = thinned_to_22();
        est.maybe_extend();
        // The fresh subset has seen nothing: rate 1 > subset 1's 4/7.
        assert_eq!(est.route(), 1);
        assert!(!est.can_extend());
    }

    #[test]
    fn below_mean_routing_takes_weighted_branch_for_fresh_subset() {
        let mut est = thinned_to_22();
        est.config.routing = Routing::BelowMean;
        est.maybe_extend();
        est.rng.weighted.push_back(0);
        assert_eq!(est.route(), 0);
        assert!(est.can_extend());
    }

    #[test]
    fn below_mean_routing_sticks_to_a_lagging_subset() {
        // Newest rate 0.4 below the older mean 0.6 → newest, deterministically.
        let mut est = HtCountP::with_rng(cfg(100, 0.9), Scripted::default()).unwrap();
        est.config.routing = Routing::BelowMean;
        let mut older = Reservoir::new(50);
        let mut newer = Reservoir::new(50);
        let mut rng = Scripted::default();
        for a in 1..=3 {
            older.offer(&sized(a, 1), &mut rng);
        }
        for _ in 0..2 {
            older.observe();
        }
        for a in 10..=11 {
            newer.offer(&sized(a, 1), &mut rng);
        }
        for _ in 0..3 {
            newer.observe();
        }
        est.subsets = vec![older, newer];
        assert_eq!(est.route(), 1);
    }

    #[test]
    fn weighted_branch_uses_allocations() {
        let mut est = HtCountP::new(cfg(48, 0.9), 11).unwrap();
        let mut a = Reservoir::new(32);
        let mut b = Reservoir::new(16);
        let mut rng = Scripted::default();
        a.offer(&sized(1, 1), &mut rng);
        b.offer(&sized(2, 1), &mut rng);
        // Equal rates: CatchUp takes the weighted branch.
        est.subsets = vec![a, b];
        let mut hits = [0u32; 2];
        for _ in 0..30_000 {
            hits[est.route()] += 1;
        }
        let frac = hits[0] as f64 / 30_000.0;
        assert!((frac - 2.0 / 3.0).abs() < 0.015, "frac = {frac}");
    }

    fn with_stats(stats: &[(u64, u64)]) -> HtCountP<Scripted> {
        let mut est = HtCountP::with_rng(cfg(1000, 0.9), Scripted::default()).unwrap();
        let mut rng = Scripted::default();
        let mut arrival = 1;
        est.subsets = stats
            .iter()
            .map(|&(m, g)| {
                let mut r = Reservoir::new(100);
                for _ in 0..g {
                    r.offer(&sized(arrival, 1), &mut rng);
                    arrival += 1;
                }
                for _ in g..m {
                    r.observe();
                }
                r
            })
            .collect();
        est
    }

    #[test]
    fn pair_probability_cases() {
        let est = with_stats(&[(9, 5), (6, 4)]);
        assert_relative_eq!(
            est.pair_probability(0, 0).unwrap(),
            20.0 / 72.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            est.pair_probability(0, 1).unwrap(),
            20.0 / 54.0,
            max_relative = 1e-15
        );
        assert_eq!(
            est.pair_probability(0, 1).unwrap(),
            est.pair_probability(1, 0).unwrap()
        );
        let fresh = with_stats(&[(3, 3), (2, 2)]);
        assert_eq!(fresh.pair_probability(0, 1).unwrap(), 1.0);
        assert_eq!(fresh.pair_probability(0, 0).unwrap(), 1.0);
        assert!(est.pair_probability(0, 2).is_err());
        let starved = with_stats(&[(9, 1)]);
        assert!(matches!(
            starved.pair_probability(0, 0),
            Err(Error::Arity { .. })
        ));
    }

    #[test]
    fn triple_probability_cases() {
        let est = with_stats(&[(9, 5), (6, 4), (4, 2)]);
        assert_relative_eq!(
            est.triple_probability(0, 0, 0).unwrap(),
            60.0 / 504.0,
            max_relative = 1e-15
        );
        let two_one = (20.0 / 72.0) * (4.0 / 6.0);
        for (x, y, z) in [(0, 0, 1), (0, 1, 0), (1, 0, 0)] {
            assert_relative_eq!(
                est.triple_probability(x, y, z).unwrap(),
                two_one,
                max_relative = 1e-15
            );
        }
        assert_relative_eq!(
            est.triple_probability(2, 0, 1).unwrap(),
            (5.0 / 9.0) * (4.0 / 6.0) * (2.0 / 4.0),
            max_relative = 1e-15
        );
        let fresh = with_stats(&[(3, 3), (2, 2), (1, 1)]);
        assert_eq!(fresh.triple_probability(0, 1, 2).unwrap(), 1.0);
        assert!(with_stats(&[(9, 2)]).triple_probability(0, 0, 0).is_err());
    }

    #[test]
    fn single_subset_matches_htcount_bit_for_bit() {
        let stream: Vec<Hyperedge> = (1..=200u64)
            .map(|a| {
                let x = (a * 7919 % 23) as u32;
                Hyperedge::new(a, [x, (x + 3) % 23, (x * 5 + 1) % 23, (a % 4) as u32]).unwrap()
            })
            .collect();
        let mut single = HtCount::new(HtCountConfig::new(60), 99).unwrap();
        let mut c = cfg(60, 0.9);
        c.max_subsets = 1;
        let mut part = HtCountP::new(c, 99).unwrap();
        for e in &stream {
            let a = *single.process(e);
            let b = *part.process(e);
            assert_eq!(a, b);
        }
        assert_eq!(single.sampled_arrivals(), part.sampled_arrivals());
    }

    #[test]
    fn memory_stays_within_budget_across_subsets() {
        let mut est = HtCountP::new(cfg(64, 0.95), 5).unwrap();
        for a in 1..=2000u64 {
            let size = 1 + (a * 2654435761 % 97) as u32 % 30;
            est.process(&sized(a, size));
            assert!(est.memory_used() <= 64);
            let allocs: usize = est.allocations().iter().sum();
            assert!(allocs <= 64);
            for s in est.subsets() {
                assert!(s.used() <= s.budget());
            }
        }
        assert!(est.subsets().len() <= DEFAULT_MAX_SUBSETS);
        assert!(
            est.subsets().len() > 1,
            "heavy-tailed sizes should trigger a split"
        );
    }
}
