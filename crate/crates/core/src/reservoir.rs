//! Memory-budgeted reservoir sampling of hyperedges.
//!
//! The budget counts vertex slots, not edges. While the stream has never
//! been thinned and the next edge fits, edges are taken outright. After
//! that, an arrival is admitted with probability |G_s|/m; an admitted edge
//! replaces a uniformly chosen member and then uniformly chosen members
//! (the newcomer included) are dropped until the sample fits again.

use rand::Rng;

use crate::hypergraph::Hyperedge;

/// The random decisions a sampler makes. Implemented for every [`Rng`];
/// tests can substitute scripted sources.
pub trait RandomSource {
    /// One uniform draw in [0, 1) compared against `p`.
    fn bernoulli(&mut self, p: f64) -> bool;
    /// Uniform index in `0..n`. `n` is never 0.
    fn uniform_index(&mut self, n: usize) -> usize;
    /// Index `i` with probability `weights[i] / Σ weights`.
    fn weighted_index(&mut self, weights: &[u64]) -> usize;
}

impl<R: Rng + ?Sized> RandomSource for R {
    fn bernoulli(&mut self, p: f64) -> bool {
        self.random::<f64>() < p
    }

    fn uniform_index(&mut self, n: usize) -> usize {
        self.random_range(0..n)
    }

    fn weighted_index(&mut self, weights: &[u64]) -> usize {
        let total: u64 = weights.iter().sum();
        debug_assert!(total > 0);
        let mut draw = self.random_range(0..total);
        for (i, &w) in weights.iter().enumerate() {
            if draw < w {
                return i;
            }
            draw -= w;
        }
        unreachable!("draw below total weight")
    }
}

/// Result of offering an arrival to a reservoir.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Admission {
    /// Not taken; the sample is unchanged.
    Rejected,
    /// Taken and still present.
    Admitted,
    /// Taken, then removed again by the eviction loop.
    AdmittedThenEvicted,
}

impl Admission {
    /// Whether the arrival is in the sample afterwards.
    pub fn survived(self) -> bool {
        self == Admission::Admitted
    }
}

/// One reservoir: sample set, slot usage, slot budget and arrival counter.
#[derive(Debug, Clone)]
pub struct Reservoir {
    sample: Vec<Hyperedge>,
    used: usize,
    budget: usize,
    observed: u64,
    thinned: bool,
}

impl Reservoir {
    pub fn new(budget: usize) -> Self {
        Reservoir {
            sample: Vec::new(),
            used: 0,
            budget,
            observed: 0,
            thinned: false,
        }
    }

    pub fn sample(&self) -> &[Hyperedge] {
        &self.sample
    }

    pub fn len(&self) -> usize {
        self.sample.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sample.is_empty()
    }

    /// Vertex slots currently held.
    pub fn used(&self) -> usize {
        self.used
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// Arrivals counted so far (m).
    pub fn observed(&self) -> u64 {
        self.observed
    }

    /// True once the probabilistic branch has been taken; the reservoir
    /// never holds every arrival again after that.
    pub fn thinned(&self) -> bool {
        self.thinned
    }

    /// Changes the slot budget. Callers only shrink it to current usage.
    pub(crate) fn set_budget(&mut self, budget: usize) {
        debug_assert!(self.used <= budget);
        self.budget = budget;
    }

    /// Counts one more arrival.
    pub fn observe(&mut self) {
        self.observed += 1;
    }

    /// Decides whether `e` enters the sample. `observe` must already have
    /// been called for `e`.
    pub fn sample_hyperedge<R: RandomSource + ?Sized>(
        &mut self,
        e: &Hyperedge,
        rng: &mut R,
    ) -> Admission {
        debug_assert!(self.observed >= 1);
        if self.used + e.len() <= self.budget && self.sample.len() as u64 == self.observed - 1 {
            self.insert(e.clone());
            return Admission::Admitted;
        }

        let p = self.sample.len() as f64 / self.observed as f64;
        if !rng.bernoulli(p) {
            return Admission::Rejected;
        }
        self.thinned = true;

        if e.len() > self.budget {
            log::warn!(
                "hyperedge {} has {} vertices, more than the {}-slot budget; it will empty the sample",
                e.arrival(),
                e.len(),
                self.budget
            );
        }

        let victim = rng.uniform_index(self.sample.len());
        self.evict(victim);
        self.insert(e.clone());

        let mut evicted_again = false;
        while self.used > self.budget {
            let victim = rng.uniform_index(self.sample.len());
            evicted_again = true;
            self.evict(victim);
        }

        if !evicted_again || self.sample.iter().any(|s| s.arrival() == e.arrival()) {
            Admission::Admitted
        } else {
            Admission::AdmittedThenEvicted
        }
    }

    /// `observe` followed by `sample_hyperedge`.
    pub fn offer<R: RandomSource + ?Sized>(&mut self, e: &Hyperedge, rng: &mut R) -> Admission {
        self.observe();
        self.sample_hyperedge(e, rng)
    }

    fn insert(&mut self, e: Hyperedge) {
        self.used += e.len();
        self.sample.push(e);
    }

    fn evict(&mut self, idx: usize) {
        let gone = self.sample.swap_remove(idx);
        self.used -= gone.len();
    }
}

#[cfg(test)]
pub(crate) mod testing {
    use super::RandomSource;
    use std::collections::VecDeque;

    /// Replays a fixed list of decisions; panics if it runs dry.
    #[derive(Debug, Default)]
    pub struct Scripted {
        pub coins: VecDeque<bool>,
        pub indexes: VecDeque<usize>,
        pub weighted: VecDeque<usize>,
    }

    impl Scripted {
        pub fn new(coins: &[bool], indexes: &[usize]) -> Self {
            Scripted {
                coins: coins.iter().copied().collect(),
                indexes: indexes.iter().copied().collect(),
                weighted: VecDeque::new(),
            }
        }
    }

    impl RandomSource for Scripted {
        fn bernoulli(&mut self, _p: f64) -> bool {
            self.coins.pop_front().expect("scripted coin")
        }
        fn uniform_index(&mut self, n: usize) -> usize {
            let i = self.indexes.pop_front().expect("scripted index");
            assert!(i < n, "scripted index {i} out of 0..{n}");
            i
        }
        fn weighted_index(&mut self, weights: &[u64]) -> usize {
            let i = self.weighted.pop_front().expect("scripted weighted index");
            assert!(i < weights.len());
            i
        }
    }
}
