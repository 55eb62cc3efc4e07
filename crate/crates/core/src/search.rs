//! Beam search over a proximity graph, instrumented for distance
//! computations (NDC) and hop counts. `L = 1` is greedy routing.
//!
//! Every vertex's distance to the query is computed at most once per
//! search, so `ndc == visited` always holds.

use alloc::vec::Vec;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::graph::ProximityGraph;
use crate::neighbor::Neighbor;
use crate::VertexId;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchParams {
    /// Queue size `L`.
    pub queue_size: usize,
    /// Number of results `k`.
    pub k: usize,
    /// Defaults to the graph's entry point.
    pub entry: Option<VertexId>,
}

impl SearchParams {
    pub fn new(queue_size: usize, k: usize) -> Self {
        Self {
            queue_size,
            k,
            entry: None,
        }
    }

    pub fn with_entry(mut self, entry: VertexId) -> Self {
        self.entry = Some(entry);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::param("k must be at least 1"));
        }
        if self.queue_size < self.k {
            return Err(Error::param(alloc::format!(
                "queue size L = {} is smaller than k = {}",
                self.queue_size,
                self.k
            )));
        }
        Ok(())
    }
}

/// Per-query counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SearchStats {
    /// Distance evaluations against the query, entry included.
    pub ndc: u64,
    /// Hop vertices explored.
    pub hops: u64,
    /// Distinct vertices whose distance was computed.
    pub visited: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutput {
    /// Up to `k` results, ascending by distance then id.
    pub results: Vec<Neighbor>,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GreedyRoute {
    pub terminal: VertexId,
    /// Hop vertices in visiting order; the first is the entry.
    pub path: Vec<VertexId>,
    pub stats: SearchStats,
}

/// Epoch-stamped membership set sized to the graph; clearing is O(1).
#[derive(Debug, Clone, Default)]
struct VisitedSet {
    stamps: Vec<u32>,
    epoch: u32,
}

impl VisitedSet {
    fn reset(&mut self, n: usize) {
        if self.stamps.len() != n {
            self.stamps.clear();
            self.stamps.resize(n, 0);
            self.epoch = 0;
        }
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamps.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
    }

    /// Returns true if `id` was not yet in the set.
    #[inline]
    fn insert(&mut self, id: VertexId) -> bool {
        let slot = &mut self.stamps[id as usize];
        if *slot == self.epoch {
            false
        } else {
            *slot = self.epoch;
            true
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct QueueEntry {
    nb: Neighbor,
    explored: bool,
}

/// Reusable buffers for repeated searches on one graph.
#[derive(Debug, Clone, Default)]
pub struct SearchScratch {
    visited: VisitedSet,
    queue: Vec<QueueEntry>,
    collected: Vec<Neighbor>,
    path: Vec<VertexId>,
}

impl SearchScratch {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every vertex whose distance was computed during the last search run
    /// with collection enabled, in evaluation order.
    pub fn collected(&self) -> &[Neighbor] {
        &self.collected
    }

    /// The final bounded queue of the last search, ascending.
    pub fn queue(&self) -> impl Iterator<Item = Neighbor> + '_ {
        self.queue.iter().map(|e| e.nb)
    }

    pub fn path(&self) -> &[VertexId] {
        &self.path
    }
}

/// Core loop shared by every public entry point. Leaves the final queue,
/// and optionally the collected vertices and hop path, in `scratch`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn run_search(
    graph: &ProximityGraph,
    data: &Dataset,
    query: &[f32],
    entry: VertexId,
    queue_size: usize,
    scratch: &mut SearchScratch,
    collect: bool,
    record_path: bool,
) -> SearchStats {
    let SearchScratch {
        visited,
        queue,
        collected,
        path,
    } = scratch;
    visited.reset(graph.len());
    queue.clear();
    collected.clear();
    path.clear();

    let mut stats = SearchStats::default();
    let start = Neighbor::new(entry, data.distance_to(entry, query));
    visited.insert(entry);
    stats.ndc += 1;
    if collect {
        collected.push(start);
    }
    queue.push(QueueEntry {
        nb: start,
        explored: false,
    });

    // Entries before `cursor` are all explored.
    let mut cursor = 0;
    while let Some(offset) = queue[cursor..].iter().position(|e| !e.explored) {
        let at = cursor + offset;
        queue[at].explored = true;
        let hop = queue[at].nb.id;
        stats.hops += 1;
        if record_path {
            path.push(hop);
        }

        let mut lowest_insert = usize::MAX;
        for &v in graph.neighbors(hop) {
            if !visited.insert(v) {
                continue;
            }
            let cand = Neighbor::new(v, data.distance_to(v, query));
            stats.ndc += 1;
            if collect {
                collected.push(cand);
            }
            if queue.len() == queue_size && cand >= queue[queue_size - 1].nb {
                continue;
            }
            let pos = queue.partition_point(|e| e.nb < cand);
            queue.insert(
                pos,
                QueueEntry {
                    nb: cand,
                    explored: false,
                },
            );
            queue.truncate(queue_size);
            lowest_insert = lowest_insert.min(pos);
        }
        cursor = lowest_insert.min(at + 1);
        if cursor >= queue.len() {
            break;
        }
    }
    stats.visited = stats.ndc;
    stats
}

fn check_inputs(
    graph: &ProximityGraph,
    data: &Dataset,
    query: &[f32],
    entry: VertexId,
) -> Result<()> {
    data.check_query(query)?;
    if graph.len() != data.len() {
        return Err(Error::param(alloc::format!(
            "graph has {} vertices but the dataset has {} points",
            graph.len(),
            data.len()
        )));
    }
    if entry as usize >= graph.len() {
        return Err(Error::param(alloc::format!("entry {entry} out of range")));
    }
    Ok(())
}

/// Beam search with a fresh scratch buffer.
pub fn beam_search(
    graph: &ProximityGraph,
    data: &Dataset,
    query: &[f32],
    params: &SearchParams,
) -> Result<SearchOutput> {
    beam_search_with(graph, data, query, params, &mut SearchScratch::new())
}

/// Beam search reusing `scratch` across calls.
pub fn beam_search_with(
    graph: &ProximityGraph,
    data: &Dataset,
    query: &[f32],
    params: &SearchParams,
    scratch: &mut SearchScratch,
) -> Result<SearchOutput> {
    params.validate()?;
    let entry = params.entry.unwrap_or(graph.entry_point());
    check_inputs(graph, data, query, entry)?;
    let stats = run_search(
        graph,
        data,
        query,
        entry,
        params.queue_size,
        scratch,
        false,
        false,
    );
    let results = scratch.queue().take(params.k).collect();
    Ok(SearchOutput { results, stats })
}

/// Greedy routing: beam search with `L = 1`, exposing the hop path.
pub fn greedy_route(
    graph: &ProximityGraph,
    data: &Dataset,
    query: &[f32],
    entry: Option<VertexId>,
) -> Result<GreedyRoute> {
    let entry = entry.unwrap_or(graph.entry_point());
    check_inputs(graph, data, query, entry)?;
    let mut scratch = SearchScratch::new();
    let stats = run_search(graph, data, query, entry, 1, &mut scratch, false, true);
    Ok(GreedyRoute {
        terminal: scratch.queue[0].nb.id,
        path: core::mem::take(&mut scratch.path),
        stats,
    })
}
