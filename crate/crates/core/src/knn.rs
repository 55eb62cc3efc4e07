//! Base K-NN graph: brute force up to a size threshold, NN-descent above it.
//!
//! NN-descent here is the "neighbors of neighbors" refinement: each round,
//! every vertex proposes the (sampled) forward and reverse neighbors of its
//! (sampled) forward and reverse neighbors, and keeps the best `K` of its old
//! list plus the proposals. All lists are read from the previous round's
//! snapshot and replaced at the round barrier, so the result does not depend
//! on thread count.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::graph::ProximityGraph;
use crate::neighbor::{truncate_to_nearest, Neighbor};
use crate::par;
use crate::VertexId;

/// Stop once a round changes fewer than this fraction of list entries.
pub const CONVERGENCE_FRACTION: f64 = 0.001;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KnnParams {
    pub k: usize,
    pub iters: usize,
    pub sample_rate: f64,
    pub seed: u64,
    /// Datasets with at most this many points use the exact path.
    pub exact_threshold: usize,
}

impl Default for KnnParams {
    fn default() -> Self {
        Self {
            k: 200,
            iters: 10,
            sample_rate: 0.5,
            seed: 0,
            exact_threshold: 10_000,
        }
    }
}

impl KnnParams {
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.k == 0 || self.k >= n {
            return Err(Error::param(format!(
                "K must satisfy 1 <= K < n, got K = {} with n = {n}",
                self.k
            )));
        }
        if self.iters == 0 {
            return Err(Error::param("iters must be at least 1"));
        }
        if !(self.sample_rate > 0.0 && self.sample_rate <= 1.0) {
            return Err(Error::param(format!(
                "sample_rate must lie in (0, 1], got {}",
                self.sample_rate
            )));
        }
        Ok(())
    }
}

/// Per-build counters.
#[derive(Debug, Clone, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KnnReport {
    pub exact: bool,
    pub rounds: usize,
    pub distance_evals: u64,
    /// Sum over vertices of the K-th neighbor distance, after initialization
    /// and after each round.
    pub kth_distance_sums: Vec<f64>,
    /// List entries replaced in each round.
    pub changes: Vec<u64>,
}

/// K-NN graph with every list sorted ascending by distance.
pub fn build_knn_graph(data: &Dataset, params: &KnnParams) -> Result<ProximityGraph> {
    build_knn_graph_with_report(data, params).map(|(g, _)| g)
}

pub fn build_knn_graph_with_report(
    data: &Dataset,
    params: &KnnParams,
) -> Result<(ProximityGraph, KnnReport)> {
    let n = data.len();
    params.validate(n)?;
    let (lists, report) = if n <= params.exact_threshold {
        exact_lists(data, params.k)
    } else {
        nn_descent(data, params)
    };
    Ok((lists_to_graph(lists, params.k), report))
}

fn lists_to_graph(lists: Vec<Vec<Neighbor>>, k: usize) -> ProximityGraph {
    let mut g = ProximityGraph::empty(lists.len(), k as u32, 0);
    for (p, list) in lists.into_iter().enumerate() {
        g.set_neighbors(p as VertexId, list.into_iter().map(|nb| nb.id).collect());
    }
    g
}

/// Brute-force K nearest neighbors of every point.
pub fn exact_lists(data: &Dataset, k: usize) -> (Vec<Vec<Neighbor>>, KnnReport) {
    let n = data.len();
    let lists = par::map(n, |p| {
        let p = p as VertexId;
        let mut all: Vec<Neighbor> = (0..n as VertexId)
            .filter(|&q| q != p)
            .map(|q| Neighbor::new(q, data.distance(p, q)))
            .collect();
        truncate_to_nearest(&mut all, k);
        all
    });
    let report = KnnReport {
        exact: true,
        rounds: 0,
        distance_evals: (n as u64) * (n as u64 - 1),
        kth_distance_sums: vec![kth_sum(&lists)],
        changes: Vec::new(),
    };
    (lists, report)
}

fn kth_sum(lists: &[Vec<Neighbor>]) -> f64 {
    lists
        .iter()
        .map(|l| l.last().map_or(0.0, |nb| f64::from(nb.distance)))
        .sum()
}

/// Deterministic per-(round, vertex) generator derived from the seed.
fn rng_for(seed: u64, round: u64, vertex: u64) -> ChaCha8Rng {
    let mut z = seed
        ^ round.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ vertex.wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    // splitmix64 finalizer
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    ChaCha8Rng::seed_from_u64(z)
}

fn nn_descent(data: &Dataset, params: &KnnParams) -> (Vec<Vec<Neighbor>>, KnnReport) {
    let n = data.len();
    let k = params.k;

    let init: Vec<(Vec<Neighbor>, u64)> = par::map(n, |p| {
        let mut rng = rng_for(params.seed, 0, p as u64);
        let mut list: Vec<Neighbor> = index::sample(&mut rng, n - 1, k)
            .into_iter()
            .map(|i| {
                let q = if i >= p { i + 1 } else { i } as VertexId;
                Neighbor::new(q, data.distance(p as VertexId, q))
            })
            .collect();
        list.sort_unstable();
        (list, k as u64)
    });
    let mut report = KnnReport::default();
    let mut lists: Vec<Vec<Neighbor>> = Vec::with_capacity(n);
    for (list, evals) in init {
        report.distance_evals += evals;
        lists.push(list);
    }
    report.kth_distance_sums.push(kth_sum(&lists));

    for round in 1..=params.iters as u64 {
        // Reverse lists, each capped to the K nearest.
        let mut reverse: Vec<Vec<Neighbor>> = vec![Vec::new(); n];
        for (p, list) in lists.iter().enumerate() {
            for nb in list {
                reverse[nb.id as usize].push(Neighbor::new(p as VertexId, nb.distance));
            }
        }
        for r in reverse.iter_mut() {
            truncate_to_nearest(r, k);
        }

        let lists_ref = &lists;
        let reverse_ref = &reverse;
        let updated: Vec<(Vec<Neighbor>, u64, u64)> = par::map(n, |p| {
            let mut rng = rng_for(params.seed, round, p as u64);
            let rate = params.sample_rate;
            let own = &lists_ref[p];
            let mut proposals: Vec<VertexId> = Vec::new();
            let hubs = own.iter().chain(&reverse_ref[p]);
            for hub in hubs {
                if rng.random::<f64>() >= rate {
                    continue;
                }
                let h = hub.id as usize;
                for w in lists_ref[h].iter().chain(&reverse_ref[h]) {
                    if w.id as usize != p && rng.random::<f64>() < rate {
                        proposals.push(w.id);
                    }
                }
            }
            proposals.sort_unstable();
            proposals.dedup();
            proposals.retain(|id| !own.iter().any(|nb| nb.id == *id));
            let evals = proposals.len() as u64;
            let mut merged = own.clone();
            merged.extend(
                proposals
                    .into_iter()
                    .map(|q| Neighbor::new(q, data.distance(p as VertexId, q))),
            );
            truncate_to_nearest(&mut merged, k);
            let changed = merged
                .iter()
                .filter(|nb| !own.iter().any(|o| o.id == nb.id))
                .count() as u64;
            (merged, evals, changed)
        });

        let mut changes = 0;
        for (p, (list, evals, changed)) in updated.into_iter().enumerate() {
            lists[p] = list;
            report.distance_evals += evals;
            changes += changed;
        }
        report.rounds = round as usize;
        report.changes.push(changes);
        report.kth_distance_sums.push(kth_sum(&lists));
        if (changes as f64) < CONVERGENCE_FRACTION * (n * k) as f64 {
            break;
        }
    }
    (lists, report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(n: usize) -> Dataset {
        let rows: Vec<[f32; 1]> = (0..n).map(|i| [(i * i) as f32]).collect();
        Dataset::from_rows(&rows).unwrap()
    }

    #[test]
    fn k_must_be_below_n() {
        let data = line(4);
        let params = KnnParams {
            k: 4,
            ..Default::default()
        };
        assert!(build_knn_graph(&data, &params).is_err());
        let params = KnnParams {
            k: 0,
            ..Default::default()
        };
        assert!(build_knn_graph(&data, &params).is_err());
    }

    #[test]
    fn full_k_is_the_complete_graph() {
        let data = line(6);
        let params = KnnParams {
            k: 5,
            ..Default::default()
        };
        let g = build_knn_graph(&data, &params).unwrap();
        assert_eq!(g, {
            let mut c = ProximityGraph::complete(&data);
            c.set_max_degree(5);
            c
        });
    }

    #[test]
    fn exact_lists_are_sorted() {
        let data = line(10);
        let params = KnnParams {
            k: 3,
            ..Default::default()
        };
        let g = build_knn_graph(&data, &params).unwrap();
        assert!(g.is_distance_sorted(&data));
        // squares: 0 1 4 9 16 ...; nearest to 0 are 1, 4, 9
        assert_eq!(g.neighbors(0), &[1, 2, 3]);
        assert_eq!(g.neighbors(3), &[2, 4, 1]);
    }
}
