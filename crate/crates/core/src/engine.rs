//! The per-arrival counting step shared by both samplers.
//!
//! When a hyperedge survives sampling, every hybrid configuration it forms
//! with one sampled edge and every outer / hyper-edge triangle it forms with
//! two sampled edges is added, weighted by the inverse probability that all
//! participating edges are in the sample. Each configuration is therefore
//! seen exactly once: when its last edge arrives.

use crate::estimates::TriangleEstimates;
use crate::hypergraph::{intersection_size, triple_intersection_size, Hyperedge};

/// Index of the sample subset an edge lives in. Single-reservoir sampling
/// uses tag 0 for everything.
pub type SubsetTag = usize;

/// Supplies the correction factor for a pair or triple of sampled edges,
/// keyed by the subsets they were sampled into. The first tag is always the
/// newly arrived edge's.
pub trait Corrections {
    fn pair(&self, new: SubsetTag, other: SubsetTag) -> f64;
    fn triple(&self, new: SubsetTag, a: SubsetTag, b: SubsetTag) -> f64;
}

/// The same θ and γ for every pair and triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantCorrections {
    pub theta: f64,
    pub gamma: f64,
}

impl ConstantCorrections {
    pub const UNIT: ConstantCorrections = ConstantCorrections {
        theta: 1.0,
        gamma: 1.0,
    };
}

impl Corrections for ConstantCorrections {
    fn pair(&self, _: SubsetTag, _: SubsetTag) -> f64 {
        self.theta
    }

    fn triple(&self, _: SubsetTag, _: SubsetTag, _: SubsetTag) -> f64 {
        self.gamma
    }
}

/// Every currently sampled hyperedge with its subset tag, excluding the
/// edge being processed.
#[derive(Debug, Clone, Default)]
pub struct SampleView<'a> {
    members: Vec<(&'a Hyperedge, SubsetTag)>,
}

impl<'a> SampleView<'a> {
    /// Flattens `subsets` (tagged by position) into one view, leaving out the
    /// edge whose arrival index is `exclude`.
    pub fn from_subsets<I>(subsets: I, exclude: u64) -> Self
    where
        I: IntoIterator<Item = &'a [Hyperedge]>,
    {
        let members = subsets
            .into_iter()
            .enumerate()
            .flat_map(|(tag, edges)| edges.iter().map(move |e| (e, tag)))
            .filter(|(e, _)| e.arrival() != exclude)
            .collect();
        SampleView { members }
    }

    pub fn from_members(members: Vec<(&'a Hyperedge, SubsetTag)>) -> Self {
        SampleView { members }
    }

    pub fn members(&self) -> &[(&'a Hyperedge, SubsetTag)] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Hybrid configurations between two edges sharing `shared` vertices: a
/// 2-subset of the shared vertices plus one vertex exclusive to either edge.
pub fn hybrid_contribution(len_i: usize, len_j: usize, shared: usize) -> u64 {
    if shared < 2 {
        return 0;
    }
    let exclusive = (len_i + len_j - 2 * shared) as u64;
    let shared = shared as u64;
    exclusive * shared * (shared - 1) / 2
}

/// Outer configurations in a pairwise-intersecting triple: one vertex from
/// each pairwise region outside the common core.
pub fn outer_contribution(i_ij: usize, i_ik: usize, i_jk: usize, i_triple: usize) -> u64 {
    debug_assert!(i_triple <= i_ij.min(i_ik).min(i_jk));
    ((i_ij - i_triple) * (i_ik - i_triple) * (i_jk - i_triple)) as u64
}

/// Hyper-edge triangle class from the number of inclusion (C) pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriangleClass {
    Ccc,
    Tcc,
    Ttc,
    Ttt,
}

impl TriangleClass {
    pub fn from_inclusions(n: usize) -> Self {
        match n {
            3 => TriangleClass::Ccc,
            2 => TriangleClass::Tcc,
            1 => TriangleClass::Ttc,
            _ => TriangleClass::Ttt,
        }
    }
}

fn is_inclusion(len_a: usize, len_b: usize, shared: usize) -> bool {
    shared > 0 && shared == len_a.min(len_b)
}

/// Adds the contributions of `e` (sampled into subset `e_tag`) against
/// everything in `view`.
pub fn update_triangles<C: Corrections + ?Sized>(
    e: &Hyperedge,
    e_tag: SubsetTag,
    view: &SampleView<'_>,
    corrections: &C,
    est: &mut TriangleEstimates,
) {
    // Only edges touching e can take part in anything.
    let touching: Vec<(usize, usize)> = view
        .members
        .iter()
        .enumerate()
        .filter_map(|(idx, (other, _))| {
            let shared = intersection_size(e, other);
            (shared > 0).then_some((idx, shared))
        })
        .collect();

    for (pos, &(j, i_ij)) in touching.iter().enumerate() {
        let (e_j, tag_j) = view.members[j];
        let hyb = hybrid_contribution(e.len(), e_j.len(), i_ij);
        if hyb > 0 {
            est.hybrid += hyb as f64 * corrections.pair(e_tag, tag_j);
        }

        for &(k, i_ik) in &touching[pos + 1..] {
            let (e_k, tag_k) = view.members[k];
            let i_jk = intersection_size(e_j, e_k);
            if i_jk == 0 {
                continue;
            }
            let core = triple_intersection_size(e, e_j, e_k);
            let gamma = corrections.triple(e_tag, tag_j, tag_k);

            let otr = outer_contribution(i_ij, i_ik, i_jk, core);
            if otr > 0 {
                est.outer += otr as f64 * gamma;
            }

            let inclusions = usize::from(is_inclusion(e.len(), e_j.len(), i_ij))
                + usize::from(is_inclusion(e.len(), e_k.len(), i_ik))
                + usize::from(is_inclusion(e_j.len(), e_k.len(), i_jk));
            match TriangleClass::from_inclusions(inclusions) {
                TriangleClass::Ccc => est.ccc += gamma,
                TriangleClass::Tcc => est.tcc += gamma,
                TriangleClass::Ttc => est.ttc += gamma,
                TriangleClass::Ttt => est.ttt += gamma,
            }
        }
    }
}
