//! Alpha-convergent proximity graphs for approximate nearest-neighbor search.
//!
//! The crate is `no_std` (with `alloc`) by default-off of the `std` feature.
//! It contains everything that is pure computation:
//!
//! * [`dataset`]: vector storage and the distance function.
//! * [`pruning`]: the shifted-scaled edge pruning rule, its baseline
//!   relatives, and adaptive per-node pruning with distance reuse.
//! * [`exact`]: the quadratic reference construction and brute-force
//!   checkers for its structural guarantees.
//! * [`knn`]: the base K-NN graph (exact, or NN-descent refinement).
//! * [`construction`]: the practical four-phase build pipeline.
//! * [`search`]: instrumented beam search and greedy routing.
//! * [`eval`]: ground truth, recall, queue-size sweeps, and tau tuning.
//!
//! File formats, the CLI, and report writers live in the `acng` crate.
//! Enable `parallel` to run per-vertex work on rayon; outputs do not depend
//! on the thread count.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod construction;
pub mod dataset;
pub mod error;
pub mod eval;
pub mod exact;
pub mod graph;
pub mod knn;
pub mod neighbor;
mod par;
pub mod pruning;
pub mod search;
pub mod stats;
pub mod synth;

pub use construction::{build_cng, BuildReport, CngParams};
pub use dataset::{distance, Dataset, Metric};
pub use error::{Error, Result};
pub use eval::{compute_ground_truth, recall_at_k, sweep, EvalRecord, GroundTruth};
pub use exact::{build_exact, ExactBuildParams};
pub use graph::ProximityGraph;
pub use knn::{build_knn_graph, KnnParams};
pub use neighbor::Neighbor;
pub use pruning::{adaptive_prune, prune_candidates, prunes, AdaptiveSchedule, PruneRule};
pub use search::{beam_search, greedy_route, SearchParams, SearchStats};
pub use stats::{compute_stats, DatasetStats};

/// Vertex identifier. Datasets are limited to `u32::MAX` points.
pub type VertexId = u32;
