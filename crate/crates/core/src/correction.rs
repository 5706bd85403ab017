//! Inclusion probabilities and their inverses (correction factors).
//!
//! A reservoir that has seen `m` edges and holds `g` of them includes any
//! fixed set of `k` of its edges with probability
//! `g(g-1)..(g-k+1) / (m(m-1)..(m-k+1))`. Independent reservoirs multiply.
//! Products are formed in `u128` so the only rounding is the final division.

use crate::error::{Error, Result};

/// Observation state of one reservoir: edges seen and edges held.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubsetStats {
    pub observed: u64,
    pub sampled: u64,
}

impl SubsetStats {
    pub fn new(observed: u64, sampled: u64) -> Self {
        SubsetStats { observed, sampled }
    }
}

fn falling(n: u64, k: u64) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * u128::from(n.saturating_sub(i)))
}

/// Joint inclusion odds for a group of edges, given as (subset stats, how
/// many of the edges live in that subset). Returns (Π sampled-falling,
/// Π observed-falling).
fn joint_terms(groups: &[(SubsetStats, u64)]) -> Result<(u128, u128)> {
    let mut num = 1u128;
    let mut den = 1u128;
    for &(s, k) in groups {
        if s.sampled < k {
            return Err(Error::Arity {
                needed: k,
                have: s.sampled,
            });
        }
        num *= falling(s.sampled, k);
        den *= falling(s.observed, k);
    }
    Ok((num, den))
}

/// Probability that a specific group of sampled edges is jointly present.
pub fn joint_probability(groups: &[(SubsetStats, u64)]) -> Result<f64> {
    let (num, den) = joint_terms(groups)?;
    Ok(if num == den {
        1.0
    } else {
        num as f64 / den as f64
    })
}

/// Inverse of [`joint_probability`]: the weight a counted configuration gets.
pub fn joint_correction(groups: &[(SubsetStats, u64)]) -> Result<f64> {
    let (num, den) = joint_terms(groups)?;
    Ok(if num == den {
        1.0
    } else {
        den as f64 / num as f64
    })
}

/// θ for a single reservoir: m(m−1) / (|G_s|(|G_s|−1)).
pub fn correction_theta(observed: u64, sampled: u64) -> Result<f64> {
    joint_correction(&[(SubsetStats::new(observed, sampled), 2)])
}

/// γ for a single reservoir: m(m−1)(m−2) / (|G_s|(|G_s|−1)(|G_s|−2)).
pub fn correction_gamma(observed: u64, sampled: u64) -> Result<f64> {
    joint_correction(&[(SubsetStats::new(observed, sampled), 3)])
}

/// Largest correction factor that any `arity` currently sampled edges could
/// receive, over every way of drawing them from the reservoirs. NaN when
/// fewer than `arity` edges are sampled in total.
pub fn max_correction(stats: &[SubsetStats], arity: u64) -> f64 {
    fn go(stats: &[SubsetStats], left: u64, groups: &mut Vec<(SubsetStats, u64)>, best: &mut f64) {
        let Some((&s, rest)) = stats.split_first() else {
            if left == 0 {
                if let Ok(f) = joint_correction(groups) {
                    *best = best.max(f);
                }
            }
            return;
        };
        for k in 0..=left.min(s.sampled) {
            if k > 0 {
                groups.push((s, k));
            }
            go(rest, left - k, groups, best);
            if k > 0 {
                groups.pop();
            }
        }
    }
    let mut best = f64::NAN;
    go(stats, arity, &mut Vec::new(), &mut best);
    best
}
