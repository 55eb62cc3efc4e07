//! The practical alpha-convergent neighborhood graph build.
//!
//! 1. Base K-NN graph, then the navigating node: beam search on the base
//!    graph for the centroid from a seeded random vertex.
//! 2. For each point, beam search on the base graph from the navigating
//!    node; the `C` nearest vertices whose distance was computed form the
//!    candidate list, which adaptive pruning cuts to at most `M`.
//! 3. Every edge `(u, v)` contributes a backward edge `(v, u)`. Backward
//!    edges are buffered per node, merged with the node's own edges, and the
//!    merged list is pruned once if it exceeds `M`.
//! 4. Vertices unreachable from the navigating node are attached to the
//!    nearest reachable vertex that can take another edge.
//!
//! [`prepare`] runs phase 1 and candidate generation, which do not depend on
//! tau or the pruning rule; [`finish`] runs the rest. Tau tuning reuses one
//! [`Prepared`] across many finishes.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::graph::ProximityGraph;
use crate::knn::{build_knn_graph_with_report, KnnParams};
use crate::neighbor::{truncate_to_nearest, Neighbor};
use crate::par;
use crate::pruning::{adaptive_prune_sorted, prune_sorted, AdaptiveSchedule, CacheMode, PruneRule};
use crate::search::{run_search, SearchScratch};
use crate::VertexId;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CngParams {
    pub knn: KnnParams,
    /// `M`.
    pub max_degree: usize,
    /// `L`, used for candidate generation, the navigating node, and repair.
    pub queue_size: usize,
    /// `C`.
    pub candidate_size: usize,
    pub alpha0: f64,
    pub alpha_max: f64,
    pub d_alpha: f64,
    pub tau: f64,
    /// Prune once at this `α` instead of adaptively.
    pub fixed_alpha: Option<f64>,
    /// Prune once with this rule instead of the shifted-scaled rule.
    pub rule_override: Option<PruneRule>,
    pub seed: u64,
}

impl Default for CngParams {
    fn default() -> Self {
        Self {
            knn: KnnParams::default(),
            max_degree: 70,
            queue_size: 60,
            candidate_size: 500,
            alpha0: 0.9,
            alpha_max: 1.6,
            d_alpha: 0.05,
            tau: 0.0,
            fixed_alpha: None,
            rule_override: None,
            seed: 0,
        }
    }
}

impl CngParams {
    pub fn schedule(&self) -> AdaptiveSchedule {
        AdaptiveSchedule {
            alpha0: self.alpha0,
            alpha_max: self.alpha_max,
            d_alpha: self.d_alpha,
            max_degree: self.max_degree,
        }
    }

    /// Checks everything that does not depend on the dataset.
    pub fn validate(&self) -> Result<()> {
        if self.max_degree < 2 {
            return Err(Error::param(format!(
                "M must be at least 2, got {}",
                self.max_degree
            )));
        }
        if self.candidate_size < self.max_degree {
            return Err(Error::param(format!(
                "C ({}) must be at least M ({})",
                self.candidate_size, self.max_degree
            )));
        }
        if self.queue_size == 0 {
            return Err(Error::param("L must be at least 1"));
        }
        if !(self.tau.is_finite() && self.tau >= 0.0) {
            return Err(Error::param(format!(
                "tau must be non-negative, got {}",
                self.tau
            )));
        }
        if self.fixed_alpha.is_some() && self.rule_override.is_some() {
            return Err(Error::param(
                "fixed_alpha and rule_override are mutually exclusive",
            ));
        }
        self.schedule().validate()?;
        self.selector().validate()
    }

    fn selector(&self) -> Selector {
        match (self.rule_override, self.fixed_alpha) {
            (Some(rule), _) => Selector::Single(rule),
            (None, Some(alpha)) => Selector::Single(PruneRule::ShiftedScaled {
                alpha,
                tau: self.tau,
            }),
            (None, None) => Selector::Adaptive(self.schedule(), self.tau),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Selector {
    Adaptive(AdaptiveSchedule, f64),
    Single(PruneRule),
}

struct Selection {
    neighbors: Vec<Neighbor>,
    distance_evals: u64,
    exhausted: bool,
}

impl Selector {
    fn validate(&self) -> Result<()> {
        match self {
            Selector::Adaptive(sched, tau) => {
                sched.validate()?;
                PruneRule::ShiftedScaled {
                    alpha: sched.alpha0,
                    tau: *tau,
                }
                .validate()
            }
            Selector::Single(rule) => rule.validate(),
        }
    }

    fn select(&self, data: &Dataset, sorted: &[Neighbor], max_degree: usize) -> Selection {
        match self {
            Selector::Adaptive(sched, tau) => {
                let out = adaptive_prune_sorted(data, sorted, sched, *tau, CacheMode::Memoized);
                Selection {
                    neighbors: out.neighbors,
                    distance_evals: out.distance_evals,
                    exhausted: out.exhausted,
                }
            }
            Selector::Single(rule) => {
                let mut evals = 0;
                let neighbors = prune_sorted(data, sorted, rule, Some(max_degree), &mut evals);
                Selection {
                    neighbors,
                    distance_evals: evals,
                    exhausted: false,
                }
            }
        }
    }

    fn is_adaptive(&self) -> bool {
        matches!(self, Selector::Adaptive(..))
    }
}

/// Wall-clock seconds per phase; zero without the `std` feature.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PhaseTimings {
    pub knn: f64,
    pub navigating_node: f64,
    pub candidates: f64,
    pub pruning: f64,
    pub backward_edges: f64,
    pub repair: f64,
}

/// Distance evaluations per phase.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PhaseDistanceEvals {
    pub knn: u64,
    pub navigating_node: u64,
    pub candidates: u64,
    pub pruning: u64,
    pub backward_edges: u64,
    pub repair: u64,
}

#[derive(Debug, Clone, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BuildReport {
    pub n: usize,
    pub navigating_node: VertexId,
    pub timings: PhaseTimings,
    pub distance_evals: PhaseDistanceEvals,
    /// Adaptive-pruning calls while selecting each point's neighbors.
    pub phase2_adaptive_prunes: u64,
    /// Adaptive-pruning calls during backward-edge merging; at most `n`.
    pub phase3_adaptive_prunes: u64,
    /// Merged lists in phase 3 that exceeded `M` and were pruned (by any rule).
    pub phase3_pruned_nodes: u64,
    /// Adaptive calls whose schedule ran out below `M / 2` neighbors.
    pub exhausted_prunes: u64,
    /// Edges added to restore reachability.
    pub repaired_vertices: u64,
    pub edges: u64,
    pub max_out_degree: u64,
}

#[cfg(feature = "std")]
struct Stopwatch(std::time::Instant);

#[cfg(feature = "std")]
impl Stopwatch {
    fn start() -> Self {
        Self(std::time::Instant::now())
    }

    fn lap(&mut self) -> f64 {
        let now = std::time::Instant::now();
        let secs = now.duration_since(self.0).as_secs_f64();
        self.0 = now;
        secs
    }
}

#[cfg(not(feature = "std"))]
struct Stopwatch;

#[cfg(not(feature = "std"))]
impl Stopwatch {
    fn start() -> Self {
        Stopwatch
    }

    fn lap(&mut self) -> f64 {
        0.0
    }
}

/// Approximate nearest data point to the centroid, found by beam search on
/// `base` from a vertex chosen by `seed`.
pub fn select_navigating_node(
    base: &ProximityGraph,
    data: &Dataset,
    queue_size: usize,
    seed: u64,
) -> Result<VertexId> {
    Ok(navigating_node(base, data, queue_size, seed)?.0)
}

fn navigating_node(
    base: &ProximityGraph,
    data: &Dataset,
    queue_size: usize,
    seed: u64,
) -> Result<(VertexId, u64)> {
    if base.len() != data.len() {
        return Err(Error::param("base graph and dataset sizes differ"));
    }
    if queue_size == 0 {
        return Err(Error::param("L must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = rng.random_range(0..data.len() as VertexId);
    let centroid = data.centroid();
    let mut scratch = SearchScratch::new();
    let stats = run_search(
        base,
        data,
        &centroid,
        start,
        queue_size,
        &mut scratch,
        false,
        false,
    );
    let best = scratch.queue().next().expect("queue holds the entry").id;
    Ok((best, stats.ndc))
}

/// The `C` nearest of all vertices whose distance to point `p` was computed
/// by a beam search on `base` from `entry`, excluding `p`, ascending.
pub fn generate_candidates(
    base: &ProximityGraph,
    data: &Dataset,
    p: VertexId,
    entry: VertexId,
    queue_size: usize,
    count: usize,
) -> Result<Vec<Neighbor>> {
    if base.len() != data.len() {
        return Err(Error::param("base graph and dataset sizes differ"));
    }
    if p as usize >= data.len() || entry as usize >= data.len() {
        return Err(Error::param("vertex id out of range"));
    }
    if queue_size == 0 {
        return Err(Error::param("L must be at least 1"));
    }
    let mut scratch = SearchScratch::new();
    Ok(candidates_with(base, data, p, entry, queue_size, count, &mut scratch).0)
}

fn candidates_with(
    base: &ProximityGraph,
    data: &Dataset,
    p: VertexId,
    entry: VertexId,
    queue_size: usize,
    count: usize,
    scratch: &mut SearchScratch,
) -> (Vec<Neighbor>, u64) {
    let stats = run_search(
        base,
        data,
        data.row(p),
        entry,
        queue_size,
        scratch,
        true,
        false,
    );
    let mut cands: Vec<Neighbor> = scratch
        .collected()
        .iter()
        .filter(|c| c.id != p)
        .copied()
        .collect();
    truncate_to_nearest(&mut cands, count);
    (cands, stats.ndc)
}

/// Phase 1 and candidate generation.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub base: ProximityGraph,
    pub navigating_node: VertexId,
    /// Per point, ascending.
    pub candidates: Vec<Vec<Neighbor>>,
    report: BuildReport,
}

pub fn prepare(data: &Dataset, params: &CngParams) -> Result<Prepared> {
    params.validate()?;
    params.knn.validate(data.len())?;
    data.ensure_distinct()?;
    let n = data.len();
    let mut report = BuildReport {
        n,
        ..Default::default()
    };
    let mut clock = Stopwatch::start();

    let (base, knn_report) = build_knn_graph_with_report(data, &params.knn)?;
    report.distance_evals.knn = knn_report.distance_evals;
    report.timings.knn = clock.lap();

    let (s, nav_ndc) = navigating_node(&base, data, params.queue_size, params.seed)?;
    report.navigating_node = s;
    report.distance_evals.navigating_node = nav_ndc;
    report.timings.navigating_node = clock.lap();

    let per_point = par::map_init(n, SearchScratch::new, |scratch, p| {
        candidates_with(
            &base,
            data,
            p as VertexId,
            s,
            params.queue_size,
            params.candidate_size,
            scratch,
        )
    });
    let mut candidates = Vec::with_capacity(n);
    for (cands, ndc) in per_point {
        report.distance_evals.candidates += ndc;
        candidates.push(cands);
    }
    report.timings.candidates = clock.lap();

    Ok(Prepared {
        base,
        navigating_node: s,
        candidates,
        report,
    })
}

/// Pruning, backward edges, and repair on top of [`prepare`]'s output.
///
/// `params` may differ from the ones given to `prepare` in everything except
/// the base-graph settings, `L`, `C`, and the seed.
pub fn finish(
    data: &Dataset,
    prepared: &Prepared,
    params: &CngParams,
) -> Result<(ProximityGraph, BuildReport)> {
    params.validate()?;
    let n = data.len();
    if prepared.candidates.len() != n {
        return Err(Error::param(
            "prepared state belongs to a different dataset",
        ));
    }
    let m = params.max_degree;
    let selector = params.selector();
    let adaptive = selector.is_adaptive();
    let mut report = prepared.report.clone();
    let mut clock = Stopwatch::start();

    let selected: Vec<Selection> =
        par::map(n, |p| selector.select(data, &prepared.candidates[p], m));
    let mut out: Vec<Vec<Neighbor>> = Vec::with_capacity(n);
    for sel in selected {
        report.distance_evals.pruning += sel.distance_evals;
        if adaptive {
            report.phase2_adaptive_prunes += 1;
        }
        report.exhausted_prunes += u64::from(sel.exhausted);
        out.push(sel.neighbors);
    }
    report.timings.pruning = clock.lap();

    // Buffer every backward edge first, then merge each node once.
    let mut incoming: Vec<Vec<Neighbor>> = vec![Vec::new(); n];
    for (u, list) in out.iter().enumerate() {
        for nb in list {
            incoming[nb.id as usize].push(Neighbor::new(u as VertexId, nb.distance));
        }
    }
    let merged: Vec<(Vec<Neighbor>, Option<Selection>)> = par::map(n, |p| {
        let mut all = out[p].clone();
        all.extend_from_slice(&incoming[p]);
        all.sort_unstable();
        all.dedup_by_key(|nb| nb.id);
        if all.len() > m {
            let sel = selector.select(data, &all, m);
            (Vec::new(), Some(sel))
        } else {
            (all, None)
        }
    });
    drop(incoming);
    let mut graph = ProximityGraph::empty(n, m as u32, prepared.navigating_node);
    for (p, (kept, pruned)) in merged.into_iter().enumerate() {
        let list = match pruned {
            Some(sel) => {
                report.phase3_pruned_nodes += 1;
                if adaptive {
                    report.phase3_adaptive_prunes += 1;
                }
                report.exhausted_prunes += u64::from(sel.exhausted);
                report.distance_evals.backward_edges += sel.distance_evals;
                sel.neighbors
            }
            None => kept,
        };
        graph.set_neighbors(p as VertexId, list.into_iter().map(|nb| nb.id).collect());
    }
    report.timings.backward_edges = clock.lap();

    let (repaired, repair_evals) = repair_counted(
        &mut graph,
        data,
        prepared.navigating_node,
        params.queue_size,
    )?;
    report.repaired_vertices = repaired as u64;
    report.distance_evals.repair = repair_evals;
    report.timings.repair = clock.lap();

    report.edges = graph.edge_count() as u64;
    report.max_out_degree = graph.observed_max_degree() as u64;
    Ok((graph, report))
}

/// Runs every phase.
pub fn build_cng(data: &Dataset, params: &CngParams) -> Result<(ProximityGraph, BuildReport)> {
    let prepared = prepare(data, params)?;
    finish(data, &prepared, params)
}

/// Makes every vertex reachable from `entry`, returning the number of edges
/// added.
///
/// Unreachable vertices are handled in ascending id order. For each, a beam
/// search from `entry` over the current graph orders the reachable vertices
/// it touched by distance; the first that can take the edge gets it. A
/// vertex below `max_degree` always can; a full one can only if the new
/// target is nearer than its farthest neighbor, which is then evicted. If
/// nothing the search touched qualifies, every reachable vertex is tried by
/// distance. If that fails too, an existing edge of a reachable vertex is
/// swapped for one to the target as long as no reachable vertex is lost.
/// Evictions can strand other vertices, so the whole procedure repeats until
/// a pass finds nothing unreachable.
pub fn repair_connectivity(
    graph: &mut ProximityGraph,
    data: &Dataset,
    entry: VertexId,
    queue_size: usize,
) -> Result<usize> {
    if graph.len() != data.len() {
        return Err(Error::param("graph and dataset sizes differ"));
    }
    if entry as usize >= graph.len() || queue_size == 0 {
        return Err(Error::param("entry out of range or L = 0"));
    }
    repair_counted(graph, data, entry, queue_size).map(|(r, _)| r)
}

fn repair_counted(
    graph: &mut ProximityGraph,
    data: &Dataset,
    entry: VertexId,
    queue_size: usize,
) -> Result<(usize, u64)> {
    let n = graph.len();
    let max_degree = graph.max_degree() as usize;
    let mut scratch = SearchScratch::new();
    let mut repaired = 0;
    let mut evals = 0u64;

    // Each pass either adds an edge or replaces one with a strictly shorter
    // one, so the loop terminates; the bound only guards against bugs.
    for _pass in 0..=n {
        let mut reach = graph.reachable_from(entry);
        let Some(first) = reach.iter().position(|r| !r) else {
            return Ok((repaired, evals));
        };
        for p in first..n {
            if reach[p] {
                continue;
            }
            let p = p as VertexId;
            let stats = run_search(
                graph,
                data,
                data.row(p),
                entry,
                queue_size,
                &mut scratch,
                true,
                false,
            );
            evals += stats.ndc;
            let mut touched: Vec<Neighbor> = scratch
                .collected()
                .iter()
                .filter(|t| reach[t.id as usize])
                .copied()
                .collect();
            touched.sort_unstable();

            let mut attached = false;
            for t in &touched {
                if try_attach(
                    graph,
                    data,
                    t.id,
                    Neighbor::new(p, t.distance),
                    max_degree,
                    &mut evals,
                ) {
                    attached = true;
                    break;
                }
            }
            if !attached {
                let mut all: Vec<Neighbor> = (0..n as VertexId)
                    .filter(|&t| reach[t as usize])
                    .map(|t| Neighbor::new(t, data.distance(p, t)))
                    .collect();
                evals += all.len() as u64;
                all.sort_unstable();
                for t in &all {
                    if try_attach(
                        graph,
                        data,
                        t.id,
                        Neighbor::new(p, t.distance),
                        max_degree,
                        &mut evals,
                    ) {
                        attached = true;
                        break;
                    }
                }
                if !attached {
                    attached = swap_attach(graph, data, entry, &all, p, &mut evals);
                }
            }
            if !attached {
                return Err(Error::Irreparable { vertex: p });
            }
            repaired += 1;
            graph.mark_reachable(p, &mut reach);
        }
    }
    let stuck = graph
        .reachable_from(entry)
        .iter()
        .position(|r| !r)
        .unwrap_or(0);
    Err(Error::Irreparable {
        vertex: stuck as VertexId,
    })
}

/// Last resort when every reachable vertex is full of nearer neighbors:
/// replace some edge `(t, w)` by `(t, p)`, trying owners `t` by distance to
/// `p` and their neighbors farthest first, and keep the first swap after
/// which everything reachable before stays reachable.
fn swap_attach(
    graph: &mut ProximityGraph,
    data: &Dataset,
    entry: VertexId,
    owners: &[Neighbor],
    p: VertexId,
    evals: &mut u64,
) -> bool {
    let before = graph.reachable_from(entry);
    for t in owners {
        let original = graph.neighbors(t.id).to_vec();
        for drop in (0..original.len()).rev() {
            let mut list: Vec<Neighbor> = original
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != drop)
                .map(|(_, &v)| Neighbor::new(v, data.distance(t.id, v)))
                .collect();
            *evals += list.len() as u64;
            let target = Neighbor::new(p, t.distance);
            let pos = list.partition_point(|nb| *nb < target);
            list.insert(pos, target);
            graph.set_neighbors(t.id, list.iter().map(|nb| nb.id).collect());
            let after = graph.reachable_from(entry);
            if after[p as usize] && before.iter().zip(&after).all(|(&b, &a)| !b || a) {
                return true;
            }
        }
        graph.set_neighbors(t.id, original);
    }
    false
}

/// Adds `target` to `owner`'s distance-sorted list if there is room, or if
/// it is nearer than the current farthest neighbor (which is evicted).
fn try_attach(
    graph: &mut ProximityGraph,
    data: &Dataset,
    owner: VertexId,
    target: Neighbor,
    max_degree: usize,
    evals: &mut u64,
) -> bool {
    let list: Vec<Neighbor> = graph
        .neighbors(owner)
        .iter()
        .map(|&v| Neighbor::new(v, data.distance(owner, v)))
        .collect();
    *evals += list.len() as u64;
    if list.iter().any(|nb| nb.id == target.id) {
        return false;
    }
    if list.len() >= max_degree {
        match list.last() {
            Some(far) if target < *far => {}
            _ => return false,
        }
    }
    let pos = list.partition_point(|nb| *nb < target);
    let ids = graph.neighbors_mut(owner);
    ids.insert(pos, target.id);
    ids.truncate(max_degree);
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(xs: &[f32]) -> Dataset {
        let rows: Vec<[f32; 1]> = xs.iter().map(|&x| [x]).collect();
        Dataset::from_rows(&rows).unwrap()
    }

    fn small_params(k: usize, m: usize, c: usize) -> CngParams {
        CngParams {
            knn: KnnParams {
                k,
                ..Default::default()
            },
            max_degree: m,
            candidate_size: c,
            queue_size: 8,
            ..Default::default()
        }
    }

    #[test]
    fn parameter_validation() {
        let mut p = CngParams::default();
        assert!(p.validate().is_ok());
        p.candidate_size = 10;
        assert!(p.validate().is_err());
        p = CngParams {
            max_degree: 1,
            candidate_size: 1,
            ..Default::default()
        };
        assert!(p.validate().is_err());
        p = CngParams {
            tau: -0.5,
            ..Default::default()
        };
        assert!(p.validate().is_err());
        p = CngParams {
            queue_size: 0,
            ..Default::default()
        };
        assert!(p.validate().is_err());
        p = CngParams {
            fixed_alpha: Some(1.2),
            rule_override: Some(PruneRule::Triangle),
            ..Default::default()
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn three_collinear_points() {
        let data = line(&[0.0, 1.0, 2.0]);
        let (g, report) = build_cng(&data, &small_params(2, 2, 2)).unwrap();
        // the far end is pruned by the middle point at every alpha up to 1.6
        assert_eq!(g.neighbors(0), &[1]);
        assert_eq!(g.neighbors(1), &[0, 2]);
        assert_eq!(g.neighbors(2), &[1]);
        for s in 0..3 {
            assert!(g.reachable_from(s).iter().all(|&r| r));
        }
        assert_eq!(report.repaired_vertices, 0);
    }

    #[test]
    fn isolated_vertex_needs_one_edge() {
        let data = line(&[0.0, 1.0, 2.0, 3.0]);
        let mut g =
            ProximityGraph::from_adjacency(vec![vec![1], vec![0, 2], vec![1], vec![2]], 2, 0)
                .unwrap();
        let added = repair_connectivity(&mut g, &data, 0, 4).unwrap();
        assert_eq!(added, 1);
        // 1 and 3 tie at distance 1 from 2
        assert_eq!(g.neighbors(2), &[1, 3]);
        assert!(g.reachable_from(0).iter().all(|&r| r));
    }

    #[test]
    fn connected_graph_is_left_alone() {
        let data = line(&[0.0, 1.0, 2.0]);
        let mut g = ProximityGraph::from_adjacency(vec![vec![1], vec![2], vec![0]], 1, 0).unwrap();
        let before = g.clone();
        assert_eq!(repair_connectivity(&mut g, &data, 0, 2).unwrap(), 0);
        assert_eq!(g, before);
    }

    #[test]
    fn full_owner_evicts_farther_neighbor() {
        // 0 -> 2 only (degree cap 1); 1 is unreachable and nearer to 0 than 2.
        let data = line(&[0.0, 1.0, 5.0]);
        let mut g = ProximityGraph::from_adjacency(vec![vec![2], vec![2], vec![0]], 1, 0).unwrap();
        let added = repair_connectivity(&mut g, &data, 0, 3).unwrap();
        assert!(added >= 1);
        assert!(g.reachable_from(0).iter().all(|&r| r));
        assert!(g.adjacency().iter().all(|l| l.len() <= 1));
    }

    #[test]
    fn navigating_node_on_symmetric_data() {
        let data = line(&[-2.0, -1.0, 0.0, 1.0, 2.0]);
        let base = ProximityGraph::complete(&data);
        for seed in 0..5 {
            assert_eq!(select_navigating_node(&base, &data, 2, seed).unwrap(), 2);
        }
    }

    #[test]
    fn candidates_exclude_the_owner() {
        let data = line(&[0.0, 1.0, 2.0, 3.0, 4.0]);
        let base = ProximityGraph::complete(&data);
        let c = generate_candidates(&base, &data, 2, 0, 10, 10).unwrap();
        let ids: Vec<_> = c.iter().map(|n| n.id).collect();
        assert_eq!(ids, vec![1, 3, 0, 4]);
    }
}
