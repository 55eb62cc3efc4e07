//! Edge pruning: the shifted-scaled rule and the three baseline rules it
//! generalizes, the shortcut-set scan, and adaptive per-node pruning.
//!
//! A candidate `u` of owner `p` is pruned by an already selected neighbor
//! `v` when the rule's predicate holds for `(δ(p,u), δ(u,v))`:
//!
//! | rule            | pruned iff                          |
//! |-----------------|-------------------------------------|
//! | `ShiftedScaled` | `δ(p,u) > α·δ(u,v) + (α+1)·τ`       |
//! | `Triangle`      | `δ(p,u) > δ(u,v)`                   |
//! | `Scaled`        | `δ(p,u) > α·δ(u,v)`                 |
//! | `Shifted`       | `δ(p,u) − 3τ > δ(u,v)`              |
//!
//! All inequalities are strict; a candidate on the boundary survives.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::neighbor::Neighbor;
use crate::VertexId;

/// Slack on the `alpha <= alpha_max` loop test, so that a schedule such as
/// `0.9 + 14 * 0.05` still reaches `1.6` despite rounding.
const ALPHA_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum PruneRule {
    /// The alpha-convergent rule.
    ShiftedScaled { alpha: f64, tau: f64 },
    /// HNSW / NSG / MRNG.
    Triangle,
    /// Vamana.
    Scaled { alpha: f64 },
    /// tau-MG.
    Shifted { tau: f64 },
}

impl PruneRule {
    pub fn validate(&self) -> Result<()> {
        let check_alpha = |alpha: f64| {
            if alpha.is_finite() && alpha > 0.0 {
                Ok(())
            } else {
                Err(Error::param(format!(
                    "alpha must be positive and finite, got {alpha}"
                )))
            }
        };
        let check_tau = |tau: f64| {
            if tau.is_finite() && tau >= 0.0 {
                Ok(())
            } else {
                Err(Error::param(format!(
                    "tau must be non-negative and finite, got {tau}"
                )))
            }
        };
        match *self {
            PruneRule::ShiftedScaled { alpha, tau } => {
                check_alpha(alpha)?;
                check_tau(tau)
            }
            PruneRule::Triangle => Ok(()),
            PruneRule::Scaled { alpha } => check_alpha(alpha),
            PruneRule::Shifted { tau } => check_tau(tau),
        }
    }

    /// Whether a selected neighbor at distance `d_uv` from candidate `u`
    /// prunes `u`, given the owner-to-candidate distance `d_pu`.
    #[inline]
    pub fn prunes(&self, d_pu: f64, d_uv: f64) -> bool {
        match *self {
            PruneRule::ShiftedScaled { alpha, tau } => d_pu > alpha * d_uv + (alpha + 1.0) * tau,
            PruneRule::Triangle => d_pu > d_uv,
            PruneRule::Scaled { alpha } => d_pu > alpha * d_uv,
            PruneRule::Shifted { tau } => d_pu - 3.0 * tau > d_uv,
        }
    }
}

/// Free-function form of [`PruneRule::prunes`] on stored `f32` distances.
#[inline]
pub fn prunes(rule: &PruneRule, d_pu: f32, d_uv: f32) -> bool {
    rule.prunes(f64::from(d_pu), f64::from(d_uv))
}

/// The largest `α` at which `v` still prunes `u` under the shifted-scaled
/// rule: `v` prunes `u` at `α` iff `alpha_bar > α`.
#[inline]
pub fn alpha_bar(d_pu: f32, d_uv: f32, tau: f64) -> f64 {
    (f64::from(d_pu) - tau) / (f64::from(d_uv) + tau)
}

/// Selects the shortcut set of `p` from `cands`.
///
/// Candidates are scanned ascending by distance to `p` (ties by id); each
/// joins the result unless an already selected member prunes it. With a
/// `cap`, the scan stops once that many members are selected.
pub fn prune_candidates(
    data: &Dataset,
    p: VertexId,
    cands: &[Neighbor],
    rule: &PruneRule,
    cap: Option<usize>,
) -> Vec<Neighbor> {
    prune_candidates_counted(data, p, cands, rule, cap).0
}

/// Like [`prune_candidates`], also returning the number of
/// candidate-to-candidate distances evaluated.
pub fn prune_candidates_counted(
    data: &Dataset,
    p: VertexId,
    cands: &[Neighbor],
    rule: &PruneRule,
    cap: Option<usize>,
) -> (Vec<Neighbor>, u64) {
    debug_assert!(
        cands.iter().all(|c| c.id != p),
        "candidate list contains its owner"
    );
    let mut sorted = cands.to_vec();
    sorted.sort_unstable();
    let mut evals = 0;
    let out = prune_sorted(data, &sorted, rule, cap, &mut evals);
    (out, evals)
}

/// The scan itself, on candidates already sorted ascending.
pub(crate) fn prune_sorted(
    data: &Dataset,
    sorted: &[Neighbor],
    rule: &PruneRule,
    cap: Option<usize>,
    evals: &mut u64,
) -> Vec<Neighbor> {
    let cap = cap.unwrap_or(usize::MAX);
    let mut selected: Vec<Neighbor> = Vec::new();
    for &u in sorted {
        if selected.len() >= cap {
            break;
        }
        let d_pu = f64::from(u.distance);
        // The predicates only weaken as d_uv grows, so a candidate that even
        // a coincident neighbor could not prune needs no distance at all.
        if !rule.prunes(d_pu, 0.0) {
            selected.push(u);
            continue;
        }
        let pruned = selected.iter().any(|v| {
            *evals += 1;
            rule.prunes(d_pu, f64::from(data.distance(u.id, v.id)))
        });
        if !pruned {
            selected.push(u);
        }
    }
    selected
}

/// Parameters of adaptive pruning: `α` runs `alpha0, alpha0 + d_alpha, …`
/// up to `alpha_max` until the shortcut set holds `max_degree / 2`
/// members; at most `max_degree` are returned.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AdaptiveSchedule {
    pub alpha0: f64,
    pub alpha_max: f64,
    pub d_alpha: f64,
    pub max_degree: usize,
}

impl Default for AdaptiveSchedule {
    fn default() -> Self {
        Self {
            alpha0: 0.9,
            alpha_max: 1.6,
            d_alpha: 0.05,
            max_degree: 70,
        }
    }
}

impl AdaptiveSchedule {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha0.is_finite() && self.alpha0 > 0.0) {
            return Err(Error::param(format!(
                "alpha0 must be positive, got {}",
                self.alpha0
            )));
        }
        if !(self.alpha_max.is_finite() && self.alpha0 <= self.alpha_max) {
            return Err(Error::param(format!(
                "alpha0 ({}) must not exceed alpha_max ({})",
                self.alpha0, self.alpha_max
            )));
        }
        if !(self.d_alpha.is_finite() && self.d_alpha > 0.0) {
            return Err(Error::param(format!(
                "d_alpha must be positive, got {}",
                self.d_alpha
            )));
        }
        if self.max_degree < 2 {
            return Err(Error::param(format!(
                "max_degree must be at least 2, got {}",
                self.max_degree
            )));
        }
        Ok(())
    }

    /// Stop threshold `floor(M / 2)`.
    pub fn half_degree(&self) -> usize {
        self.max_degree / 2
    }

    /// The `α` used in round `i` (0-based), if the schedule reaches it.
    pub fn alpha_at(&self, round: u32) -> Option<f64> {
        let alpha = self.alpha0 + f64::from(round) * self.d_alpha;
        (alpha <= self.alpha_max + ALPHA_SLACK).then_some(alpha)
    }
}

/// Memo of `ᾱ(u, v)` for one owner's candidate list, keyed by positions in
/// that list. Each pair's distance is evaluated at most once.
///
/// Columns are allocated only for candidates that have acted as pruners, so
/// storage is `|V| × |S⁺|` rather than `|V|²`.
#[derive(Debug, Clone)]
pub struct PruneCache {
    len: usize,
    column_of: Vec<u32>,
    values: Vec<f64>,
    known: Vec<bool>,
    distance_evals: u64,
}

const NO_COLUMN: u32 = u32::MAX;

impl PruneCache {
    /// A cache for a candidate list of length `len`.
    pub fn new(len: usize) -> Self {
        Self {
            len,
            column_of: vec![NO_COLUMN; len],
            values: Vec::new(),
            known: Vec::new(),
            distance_evals: 0,
        }
    }

    /// Distances evaluated so far.
    pub fn distance_evals(&self) -> u64 {
        self.distance_evals
    }

    fn slot(&mut self, u: usize, v: usize) -> usize {
        let mut col = self.column_of[v];
        if col == NO_COLUMN {
            col = (self.values.len() / self.len) as u32;
            self.column_of[v] = col;
            self.values.resize(self.values.len() + self.len, 0.0);
            self.known.resize(self.known.len() + self.len, false);
        }
        col as usize * self.len + u
    }

    /// `ᾱ(u, v)`, computed from `d_uv()` on first use of the pair.
    pub fn alpha_bar(
        &mut self,
        (u, v): (usize, usize),
        d_pu: f32,
        tau: f64,
        d_uv: impl FnOnce() -> f32,
    ) -> f64 {
        let slot = self.slot(u, v);
        if !self.known[slot] {
            self.distance_evals += 1;
            self.values[slot] = alpha_bar(d_pu, d_uv(), tau);
            self.known[slot] = true;
        }
        self.values[slot]
    }

    /// Whether `v` prunes `u` at `alpha`: `ᾱ(u, v) > alpha`.
    pub fn prunes(
        &mut self,
        pair: (usize, usize),
        d_pu: f32,
        tau: f64,
        alpha: f64,
        d_uv: impl FnOnce() -> f32,
    ) -> bool {
        self.alpha_bar(pair, d_pu, tau, d_uv) > alpha
    }
}

/// Whether adaptive pruning memoizes `ᾱ` across rounds or recomputes every
/// distance in every round. Both produce identical neighbor lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CacheMode {
    #[default]
    Memoized,
    Recompute,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdaptiveOutcome {
    /// At most `max_degree` neighbors, ascending by distance.
    pub neighbors: Vec<Neighbor>,
    /// Number of shortcut-set scans performed.
    pub rounds: u32,
    /// `α` of the last scan (`alpha0` when no scan ran).
    pub final_alpha: f64,
    /// Candidate-to-candidate distance evaluations.
    pub distance_evals: u64,
    /// The schedule ran out before the set reached `max_degree / 2`.
    pub exhausted: bool,
}

/// Adaptive pruning of `p`'s candidate list under the shifted-scaled rule.
pub fn adaptive_prune(
    data: &Dataset,
    p: VertexId,
    cands: &[Neighbor],
    sched: &AdaptiveSchedule,
    tau: f64,
    mode: CacheMode,
) -> AdaptiveOutcome {
    debug_assert!(
        cands.iter().all(|c| c.id != p),
        "candidate list contains its owner"
    );
    let mut sorted = cands.to_vec();
    sorted.sort_unstable();
    adaptive_prune_sorted(data, &sorted, sched, tau, mode)
}

/// [`adaptive_prune`] on candidates already sorted ascending.
pub(crate) fn adaptive_prune_sorted(
    data: &Dataset,
    sorted: &[Neighbor],
    sched: &AdaptiveSchedule,
    tau: f64,
    mode: CacheMode,
) -> AdaptiveOutcome {
    let half = sched.half_degree();
    let cap = sched.max_degree;
    let mut cache = match mode {
        CacheMode::Memoized => Some(PruneCache::new(sorted.len())),
        CacheMode::Recompute => None,
    };
    let mut recompute_evals = 0u64;
    // Positions into `sorted`, in selection order.
    let mut selected: Vec<usize> = Vec::new();
    let mut rounds = 0u32;
    let mut final_alpha = sched.alpha0;

    while selected.len() < half {
        let Some(alpha) = sched.alpha_at(rounds) else {
            break;
        };
        rounds += 1;
        final_alpha = alpha;
        selected.clear();
        // Every round may stop at `cap`: reaching it also ends the loop, so a
        // capped round is always the last one.
        for (ui, u) in sorted.iter().enumerate() {
            if selected.len() >= cap {
                break;
            }
            let pruned = selected.iter().any(|&vi| {
                let d_uv = || data.distance(u.id, sorted[vi].id);
                match cache.as_mut() {
                    Some(cache) => cache.prunes((ui, vi), u.distance, tau, alpha, d_uv),
                    None => {
                        recompute_evals += 1;
                        alpha_bar(u.distance, d_uv(), tau) > alpha
                    }
                }
            });
            if !pruned {
                selected.push(ui);
            }
        }
    }

    let exhausted = selected.len() < half;
    selected.truncate(cap);
    AdaptiveOutcome {
        neighbors: selected.into_iter().map(|i| sorted[i]).collect(),
        rounds,
        final_alpha,
        distance_evals: cache.map_or(recompute_evals, |c| c.distance_evals()),
        exhausted,
    }
}
