//! Quadratic reference construction: every point's candidate set is the
//! whole dataset. With the shifted-scaled rule this is the alpha-convergent
//! graph; with the baseline rules it yields MRNG, slow-preprocessing Vamana,
//! and tau-MG.
//!
//! The `verify_*` functions are brute-force checkers for the structural
//! properties such a graph must have.

use alloc::vec::Vec;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::graph::ProximityGraph;
use crate::neighbor::Neighbor;
use crate::par;
use crate::pruning::{prune_sorted, PruneRule};
use crate::VertexId;

/// Relative float tolerance for the structural checks.
pub const CHECK_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactBuildParams {
    pub rule: PruneRule,
    /// Refuse datasets larger than this.
    pub max_n: usize,
}

impl ExactBuildParams {
    pub const DEFAULT_MAX_N: usize = 20_000;

    pub fn new(rule: PruneRule) -> Self {
        Self {
            rule,
            max_n: Self::DEFAULT_MAX_N,
        }
    }
}

/// The point closest to the centroid, ties to the lower id.
pub fn medoid(data: &Dataset) -> VertexId {
    let c = data.centroid();
    (0..data.len() as VertexId)
        .map(|i| Neighbor::new(i, data.distance_to(i, &c)))
        .min()
        .map(|nb| nb.id)
        .unwrap_or(0)
}

/// All other points sorted ascending by distance to `p`.
pub(crate) fn sorted_others(data: &Dataset, p: VertexId) -> Vec<Neighbor> {
    let mut all: Vec<Neighbor> = (0..data.len() as VertexId)
        .filter(|&q| q != p)
        .map(|q| Neighbor::new(q, data.distance(p, q)))
        .collect();
    all.sort_unstable();
    all
}

/// Builds the exact graph for `params.rule`. `max_degree` of the result is
/// the observed maximum out-degree and the entry point is the medoid.
pub fn build_exact(data: &Dataset, params: &ExactBuildParams) -> Result<ProximityGraph> {
    let n = data.len();
    if n < 2 {
        return Err(Error::param("exact build needs at least two points"));
    }
    if n > params.max_n {
        return Err(Error::TooLarge {
            n,
            max: params.max_n,
        });
    }
    params.rule.validate()?;
    data.ensure_distinct()?;

    let adjacency: Vec<Vec<VertexId>> = par::map(n, |p| {
        let sorted = sorted_others(data, p as VertexId);
        let mut evals = 0;
        prune_sorted(data, &sorted, &params.rule, None, &mut evals)
            .into_iter()
            .map(|nb| nb.id)
            .collect()
    });
    let max_degree = adjacency.iter().map(Vec::len).max().unwrap_or(1).max(1) as u32;
    let mut graph = ProximityGraph::empty(n, max_degree, medoid(data));
    for (p, list) in adjacency.into_iter().enumerate() {
        graph.set_neighbors(p as VertexId, list);
    }
    Ok(graph)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducibilityViolation {
    pub query: usize,
    pub vertex: VertexId,
    /// `δ(p, q)`.
    pub distance: f64,
    /// Smallest `δ(p', q)` over out-neighbors `p'` (infinite when none).
    pub best_neighbor_distance: f64,
}

/// Checks, for every query `q` and every vertex `p` other than `q`'s exact
/// nearest neighbor, that some out-neighbor `p'` of `p` satisfies
/// `δ(p', q) ≤ δ(p, q) / α` (relative tolerance [`CHECK_TOLERANCE`]).
///
/// Fails if a query's nearest-neighbor distance exceeds `tau`, since the
/// property is only promised for such queries.
pub fn verify_alpha_reducible(
    graph: &ProximityGraph,
    data: &Dataset,
    queries: &Dataset,
    tau: f64,
    alpha: f64,
) -> Result<Vec<ReducibilityViolation>> {
    check_graph(graph, data)?;
    if queries.dim() != data.dim() {
        return Err(Error::DimensionMismatch {
            expected: data.dim(),
            found: queries.dim(),
        });
    }
    let n = data.len();
    let per_query: Vec<Result<Vec<ReducibilityViolation>>> = par::map(queries.len(), |qi| {
        let q = queries.row(qi as VertexId);
        let dist: Vec<f64> = (0..n as VertexId)
            .map(|p| f64::from(data.distance_to(p, q)))
            .collect();
        let nn = (0..n as VertexId)
            .map(|p| Neighbor::new(p, dist[p as usize] as f32))
            .min()
            .expect("non-empty dataset");
        let nn_distance = dist[nn.id as usize];
        if nn_distance > tau {
            return Err(Error::QueryOutsideTau {
                query: qi,
                nn_distance,
                tau,
            });
        }
        let mut found = Vec::new();
        for p in 0..n as VertexId {
            if p == nn.id {
                continue;
            }
            let d_pq = dist[p as usize];
            let bound = d_pq / alpha + CHECK_TOLERANCE * d_pq;
            let best = graph
                .neighbors(p)
                .iter()
                .map(|&v| dist[v as usize])
                .fold(f64::INFINITY, f64::min);
            if best > bound {
                found.push(ReducibilityViolation {
                    query: qi,
                    vertex: p,
                    distance: d_pq,
                    best_neighbor_distance: best,
                });
            }
        }
        Ok(found)
    });
    let mut all = Vec::new();
    for r in per_query {
        all.extend(r?);
    }
    Ok(all)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShortcutViolation {
    pub from: VertexId,
    pub to: VertexId,
}

/// Checks that for every ordered pair `(p, z)` that is not an edge, some
/// out-neighbor `p'` of `p` has `δ(p', z) ≤ δ(p, z) / α` (relative
/// tolerance [`CHECK_TOLERANCE`]). Exhaustive over all pairs.
pub fn verify_shortcut_reachable(
    graph: &ProximityGraph,
    data: &Dataset,
    alpha: f64,
) -> Result<Vec<ShortcutViolation>> {
    check_graph(graph, data)?;
    let n = data.len();
    let per_vertex: Vec<Vec<ShortcutViolation>> = par::map(n, |p| {
        let p = p as VertexId;
        let neighbors = graph.neighbors(p);
        let mut is_edge = alloc::vec![false; n];
        for &v in neighbors {
            is_edge[v as usize] = true;
        }
        let mut found = Vec::new();
        for z in 0..n as VertexId {
            if z == p || is_edge[z as usize] {
                continue;
            }
            let d_pz = f64::from(data.distance(p, z));
            let bound = d_pz / alpha + CHECK_TOLERANCE * d_pz;
            let ok = neighbors
                .iter()
                .any(|&v| f64::from(data.distance(v, z)) <= bound);
            if !ok {
                found.push(ShortcutViolation { from: p, to: z });
            }
        }
        found
    });
    Ok(per_vertex.into_iter().flatten().collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExclusionViolation {
    pub owner: VertexId,
    /// The nearer retained neighbor.
    pub nearer: VertexId,
    /// The farther retained neighbor, which `nearer` would prune.
    pub farther: VertexId,
}

/// Checks that no two retained out-neighbors of any vertex prune each other:
/// for `u` before `v` in `p`'s distance-sorted list, `rule` must not prune
/// `v` given `u` (with `δ(p, v)` shrunk by [`CHECK_TOLERANCE`]).
pub fn verify_mutual_exclusion(
    graph: &ProximityGraph,
    data: &Dataset,
    rule: &PruneRule,
) -> Result<Vec<ExclusionViolation>> {
    check_graph(graph, data)?;
    let per_vertex: Vec<Vec<ExclusionViolation>> = par::map(data.len(), |p| {
        let p = p as VertexId;
        let mut list: Vec<Neighbor> = graph
            .neighbors(p)
            .iter()
            .map(|&v| Neighbor::new(v, data.distance(p, v)))
            .collect();
        list.sort_unstable();
        let mut found = Vec::new();
        for (j, v) in list.iter().enumerate() {
            let d_pv = f64::from(v.distance) * (1.0 - CHECK_TOLERANCE);
            for u in &list[..j] {
                if rule.prunes(d_pv, f64::from(data.distance(u.id, v.id))) {
                    found.push(ExclusionViolation {
                        owner: p,
                        nearer: u.id,
                        farther: v.id,
                    });
                }
            }
        }
        found
    });
    Ok(per_vertex.into_iter().flatten().collect())
}

fn check_graph(graph: &ProximityGraph, data: &Dataset) -> Result<()> {
    if graph.len() != data.len() {
        return Err(Error::param(alloc::format!(
            "graph has {} vertices but the dataset has {} points",
            graph.len(),
            data.len()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn line(xs: &[f32]) -> Dataset {
        let rows: Vec<[f32; 1]> = xs.iter().map(|&x| [x]).collect();
        Dataset::from_rows(&rows).unwrap()
    }

    #[test]
    fn two_points_link_each_other() {
        let data = line(&[0.0, 5.0]);
        let g = build_exact(&data, &ExactBuildParams::new(PruneRule::Triangle)).unwrap();
        assert_eq!(g.neighbors(0), &[1]);
        assert_eq!(g.neighbors(1), &[0]);
        assert_eq!(g.max_degree(), 1);
    }

    #[test]
    fn guards() {
        let data = line(&[0.0]);
        assert!(build_exact(&data, &ExactBuildParams::new(PruneRule::Triangle)).is_err());
        let data = line(&[0.0, 1.0, 2.0]);
        let params = ExactBuildParams {
            rule: PruneRule::Triangle,
            max_n: 2,
        };
        assert_eq!(
            build_exact(&data, &params),
            Err(Error::TooLarge { n: 3, max: 2 })
        );
        let dup = line(&[0.0, 1.0, 0.0]);
        assert!(matches!(
            build_exact(&dup, &ExactBuildParams::new(PruneRule::Triangle)),
            Err(Error::DuplicatePoints { .. })
        ));
    }

    #[test]
    fn mrng_on_a_line_keeps_adjacent_points() {
        let data = line(&[0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
        let g = build_exact(&data, &ExactBuildParams::new(PruneRule::Triangle)).unwrap();
        assert_eq!(g.neighbors(0), &[1]);
        for i in 1..5u32 {
            assert_eq!(g.neighbors(i), &[i - 1, i + 1], "vertex {i}");
        }
        assert_eq!(g.neighbors(5), &[4]);
    }

    #[test]
    fn medoid_prefers_the_center() {
        let data = line(&[-3.0, 0.1, 3.0]);
        assert_eq!(medoid(&data), 1);
    }

    #[test]
    fn query_outside_tau_is_rejected() {
        let data = line(&[0.0, 1.0, 2.0]);
        let rule = PruneRule::ShiftedScaled {
            alpha: 1.2,
            tau: 0.1,
        };
        let g = build_exact(&data, &ExactBuildParams::new(rule)).unwrap();
        let q = line(&[0.5]);
        assert!(matches!(
            verify_alpha_reducible(&g, &data, &q, 0.1, 1.2),
            Err(Error::QueryOutsideTau { query: 0, .. })
        ));
    }

    #[test]
    fn complete_graph_has_no_shortcut_obligations() {
        let data = line(&[0.0, 1.0, 3.0, 7.0]);
        let g = ProximityGraph::complete(&data);
        assert!(verify_shortcut_reachable(&g, &data, 1.5)
            .unwrap()
            .is_empty());
        let empty = ProximityGraph::from_adjacency(vec![vec![]; 4], 1, 0).unwrap();
        assert_eq!(
            verify_shortcut_reachable(&empty, &data, 1.5).unwrap().len(),
            12
        );
    }
}
