//! Ground truth, recall, queue-size sweeps, and tau tuning.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::graph::ProximityGraph;
use crate::neighbor::{truncate_to_nearest, Neighbor};
use crate::par;
use crate::search::{run_search, SearchScratch};
use crate::VertexId;

/// Exact `k` nearest data ids per query, ascending by distance then id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruth {
    k: usize,
    ids: Vec<Vec<VertexId>>,
}

impl GroundTruth {
    /// Wraps precomputed lists (for example, read from an ivecs file).
    pub fn new(k: usize, ids: Vec<Vec<VertexId>>) -> Result<Self> {
        if k == 0 {
            return Err(Error::param("ground truth needs k >= 1"));
        }
        if let Some((q, row)) = ids.iter().enumerate().find(|(_, r)| r.len() != k) {
            return Err(Error::param(format!(
                "ground-truth row {q} has {} ids, expected {k}",
                row.len()
            )));
        }
        Ok(Self { k, ids })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of queries.
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn neighbors(&self, query: usize) -> &[VertexId] {
        &self.ids[query]
    }

    pub fn rows(&self) -> &[Vec<VertexId>] {
        &self.ids
    }
}

/// Exhaustive scan; the dataset's metric is used for queries too.
pub fn compute_ground_truth(data: &Dataset, queries: &Dataset, k: usize) -> Result<GroundTruth> {
    if k == 0 || k > data.len() {
        return Err(Error::param(format!(
            "k must satisfy 1 <= k <= n, got k = {k} with n = {}",
            data.len()
        )));
    }
    if queries.dim() != data.dim() {
        return Err(Error::DimensionMismatch {
            expected: data.dim(),
            found: queries.dim(),
        });
    }
    let ids = par::map(queries.len(), |qi| {
        let q = queries.row(qi as VertexId);
        let mut all: Vec<Neighbor> = (0..data.len() as VertexId)
            .map(|p| Neighbor::new(p, data.distance_to(p, q)))
            .collect();
        truncate_to_nearest(&mut all, k);
        all.into_iter().map(|nb| nb.id).collect()
    });
    Ok(GroundTruth { k, ids })
}

/// `|truth ∩ result| / |truth|`. Duplicate ids in `result` count once; an
/// empty `truth` gives 1.
pub fn recall_at_k(result: &[VertexId], truth: &[VertexId]) -> f64 {
    if truth.is_empty() {
        return 1.0;
    }
    let mut truth_sorted = truth.to_vec();
    truth_sorted.sort_unstable();
    truth_sorted.dedup();
    let mut found = result.to_vec();
    found.sort_unstable();
    found.dedup();
    let hits = found
        .iter()
        .filter(|id| truth_sorted.binary_search(id).is_ok())
        .count();
    hits as f64 / truth.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EvalRecord {
    #[cfg_attr(feature = "serde", serde(rename = "L"))]
    pub queue_size: usize,
    pub recall_at_k: f64,
    pub mean_ndc: f64,
    pub mean_hops: f64,
}

/// Per-query outcome of one search.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryResult {
    pub ids: Vec<VertexId>,
    pub recall: f64,
    pub ndc: u64,
    pub hops: u64,
}

/// Runs every query at one queue size from the graph's entry point.
pub fn evaluate_queries(
    graph: &ProximityGraph,
    data: &Dataset,
    queries: &Dataset,
    truth: &GroundTruth,
    k: usize,
    queue_size: usize,
) -> Result<Vec<QueryResult>> {
    check_sweep_inputs(graph, data, queries, truth, k)?;
    if queue_size < k {
        return Err(Error::param(format!(
            "queue size L = {queue_size} is smaller than k = {k}"
        )));
    }
    Ok(run_queries(graph, data, queries, truth, k, queue_size))
}

fn run_queries(
    graph: &ProximityGraph,
    data: &Dataset,
    queries: &Dataset,
    truth: &GroundTruth,
    k: usize,
    queue_size: usize,
) -> Vec<QueryResult> {
    let entry = graph.entry_point();
    par::map_init(queries.len(), SearchScratch::new, |scratch, qi| {
        let q = queries.row(qi as VertexId);
        let stats = run_search(graph, data, q, entry, queue_size, scratch, false, false);
        let ids: Vec<VertexId> = scratch.queue().take(k).map(|nb| nb.id).collect();
        let recall = recall_at_k(&ids, &truth.neighbors(qi)[..k]);
        QueryResult {
            ids,
            recall,
            ndc: stats.ndc,
            hops: stats.hops,
        }
    })
}

fn check_sweep_inputs(
    graph: &ProximityGraph,
    data: &Dataset,
    queries: &Dataset,
    truth: &GroundTruth,
    k: usize,
) -> Result<()> {
    if graph.len() != data.len() {
        return Err(Error::param("graph and dataset sizes differ"));
    }
    if queries.dim() != data.dim() {
        return Err(Error::DimensionMismatch {
            expected: data.dim(),
            found: queries.dim(),
        });
    }
    if truth.len() != queries.len() {
        return Err(Error::param(format!(
            "ground truth covers {} queries, got {}",
            truth.len(),
            queries.len()
        )));
    }
    if k == 0 || k > truth.k() {
        return Err(Error::param(format!(
            "k = {k} must lie in 1..={} (the ground-truth depth)",
            truth.k()
        )));
    }
    if truth
        .rows()
        .iter()
        .flatten()
        .any(|&id| id as usize >= data.len())
    {
        return Err(Error::param(
            "ground truth references ids outside the dataset",
        ));
    }
    Ok(())
}

/// One record per distinct queue size, ascending. Means are summed in query
/// order, so results are identical for any thread count.
pub fn sweep(
    graph: &ProximityGraph,
    data: &Dataset,
    queries: &Dataset,
    truth: &GroundTruth,
    k: usize,
    queue_sizes: &[usize],
) -> Result<Vec<EvalRecord>> {
    check_sweep_inputs(graph, data, queries, truth, k)?;
    let mut ls = queue_sizes.to_vec();
    ls.sort_unstable();
    ls.dedup();
    if let Some(&l) = ls.first() {
        if l < k {
            return Err(Error::param(format!(
                "queue size L = {l} is smaller than k = {k}"
            )));
        }
    }
    let nq = queries.len().max(1) as f64;
    Ok(ls
        .into_iter()
        .map(|l| {
            let per_query = run_queries(graph, data, queries, truth, k, l);
            let (mut recall, mut ndc, mut hops) = (0.0, 0.0, 0.0);
            for r in &per_query {
                recall += r.recall;
                ndc += r.ndc as f64;
                hops += r.hops as f64;
            }
            EvalRecord {
                queue_size: l,
                recall_at_k: recall / nq,
                mean_ndc: ndc / nq,
                mean_hops: hops / nq,
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuneConfig {
    /// Non-zero coarse grid; `τ = 0` is always evaluated as well.
    pub coarse: Vec<f64>,
    pub target_recall: f64,
    pub k: usize,
    pub queue_sizes: Vec<usize>,
}

impl Default for TuneConfig {
    fn default() -> Self {
        Self {
            coarse: vec![10.0, 1.0, 0.1, 0.01, 0.001],
            target_recall: 0.90,
            k: 10,
            queue_sizes: vec![10, 20, 40, 60, 80, 100, 150, 200, 300],
        }
    }
}

/// How one tau fared on the dev queries.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TauEvaluation {
    pub tau: f64,
    /// Mean NDC at the smallest queue size reaching the target recall.
    pub ndc_at_target: Option<f64>,
    /// Recall at the largest queue size.
    pub best_recall: f64,
    pub ndc_at_best: f64,
    pub records: Vec<EvalRecord>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TauChoice {
    pub tau: f64,
    /// False if no candidate reached the target recall and the choice fell
    /// back to comparing best recall.
    pub target_reached: bool,
    /// Every evaluated tau, in evaluation order.
    pub evaluations: Vec<TauEvaluation>,
}

impl TauEvaluation {
    /// True if `self` should replace `other` as the current best.
    fn beats(&self, other: &TauEvaluation) -> bool {
        let by_tau = self.tau < other.tau;
        match (self.ndc_at_target, other.ndc_at_target) {
            (Some(a), Some(b)) => a < b || (a == b && by_tau),
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => {
                self.best_recall > other.best_recall
                    || (self.best_recall == other.best_recall
                        && (self.ndc_at_best < other.ndc_at_best
                            || (self.ndc_at_best == other.ndc_at_best && by_tau)))
            }
        }
    }
}

fn best_of<'a>(evals: impl IntoIterator<Item = &'a TauEvaluation>) -> Option<&'a TauEvaluation> {
    let mut best: Option<&TauEvaluation> = None;
    for e in evals {
        if best.map_or(true, |b| e.beats(b)) {
            best = Some(e);
        }
    }
    best
}

/// Points at which the decade around `tau` is refined: `tau · 10^{-1/4}`,
/// `tau`, `tau · 10^{1/4}`, evenly spaced in log scale inside
/// `[tau / 2, 5 tau]`.
pub fn refinement_points(tau: f64) -> [f64; 3] {
    let step = libm::pow(10.0, 0.25);
    [tau / step, tau, tau * step]
}

/// Picks tau by building one graph per candidate with `build` and sweeping
/// the dev queries.
///
/// `τ = 0` and the coarse grid are evaluated first. The best non-zero coarse
/// value is then refined with [`refinement_points`], and the overall winner
/// is returned. Candidates are ranked by mean NDC at the target recall;
/// when none reaches it, by best recall, then NDC. Ties go to the smaller
/// tau.
pub fn tune_tau<F>(
    data: &Dataset,
    queries: &Dataset,
    truth: &GroundTruth,
    config: &TuneConfig,
    mut build: F,
) -> Result<TauChoice>
where
    F: FnMut(f64) -> Result<ProximityGraph>,
{
    if config.coarse.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
        return Err(Error::param(
            "coarse tau values must be positive and finite",
        ));
    }
    if config.queue_sizes.is_empty() {
        return Err(Error::param("tau tuning needs at least one queue size"));
    }
    if !(0.0..=1.0).contains(&config.target_recall) {
        return Err(Error::param("target recall must lie in [0, 1]"));
    }

    let mut evaluations: Vec<TauEvaluation> = Vec::new();
    let mut evaluate = |tau: f64, evaluations: &mut Vec<TauEvaluation>| -> Result<()> {
        if evaluations.iter().any(|e| e.tau == tau) {
            return Ok(());
        }
        let graph = build(tau)?;
        let records = sweep(&graph, data, queries, truth, config.k, &config.queue_sizes)?;
        let at_target = records
            .iter()
            .find(|r| r.recall_at_k >= config.target_recall);
        let last = records.last().expect("queue sizes are non-empty");
        evaluations.push(TauEvaluation {
            tau,
            ndc_at_target: at_target.map(|r| r.mean_ndc),
            best_recall: last.recall_at_k,
            ndc_at_best: last.mean_ndc,
            records,
        });
        Ok(())
    };

    evaluate(0.0, &mut evaluations)?;
    for &tau in &config.coarse {
        evaluate(tau, &mut evaluations)?;
    }
    let coarse_best = best_of(evaluations.iter().filter(|e| e.tau > 0.0)).map(|e| e.tau);
    if let Some(center) = coarse_best {
        for tau in refinement_points(center) {
            evaluate(tau, &mut evaluations)?;
        }
    }
    let winner = best_of(&evaluations).expect("tau = 0 was evaluated");
    Ok(TauChoice {
        tau: winner.tau,
        target_reached: evaluations.iter().any(|e| e.ndc_at_target.is_some()),
        evaluations: evaluations.clone(),
    })
}
