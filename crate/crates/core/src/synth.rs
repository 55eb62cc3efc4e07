//! Seeded synthetic datasets for tests, demos, and benchmarks.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::VertexId;

/// `n` points drawn uniformly from `[lo, hi)^dim`.
pub fn uniform(n: usize, dim: usize, lo: f32, hi: f32, seed: u64) -> Result<Dataset> {
    if lo.partial_cmp(&hi) != Some(core::cmp::Ordering::Less) {
        return Err(Error::param("uniform range needs lo < hi"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..n * dim).map(|_| rng.random_range(lo..hi)).collect();
    Dataset::new(dim, data)
}

/// Gaussian mixture with `clusters` centers drawn from `[0, spread)^dim`;
/// each point is a center plus isotropic noise with standard deviation
/// `sigma`. Points are assigned to centers round-robin.
pub fn clustered(
    n: usize,
    dim: usize,
    clusters: usize,
    spread: f32,
    sigma: f32,
    seed: u64,
) -> Result<Dataset> {
    if clusters == 0 {
        return Err(Error::param("clustered data needs at least one cluster"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centers: Vec<f32> = (0..clusters * dim)
        .map(|_| rng.random::<f32>() * spread)
        .collect();
    let mut data = Vec::with_capacity(n * dim);
    for i in 0..n {
        let c = &centers[(i % clusters) * dim..][..dim];
        for &x in c {
            let z: f32 = StandardNormal.sample(&mut rng);
            data.push(x + sigma * z);
        }
    }
    Dataset::new(dim, data)
}

/// Base and query sets shaped like SIFT descriptors: 128 integer-valued
/// dimensions in `[0, 255]` drawn from an overlapping Gaussian mixture.
/// Queries come from the same mixture; repeated base rows are dropped.
pub fn sift_like(n_base: usize, n_queries: usize, seed: u64) -> Result<(Dataset, Dataset)> {
    const DIM: usize = 128;
    let all = clustered(n_base + n_queries, DIM, 100, 120.0, 40.0, seed)?;
    let rounded: Vec<f32> = all
        .as_slice()
        .iter()
        .map(|&x| libm::roundf(x.clamp(0.0, 255.0)))
        .collect();
    let (base, queries) = rounded.split_at(n_base * DIM);
    let base = dedup_rows(&Dataset::new(DIM, base.to_vec())?)?;
    Ok((base, Dataset::new(DIM, queries.to_vec())?))
}

/// Drops repeated rows, keeping first occurrences in order.
pub fn dedup_rows(data: &Dataset) -> Result<Dataset> {
    let mut order: Vec<VertexId> = (0..data.len() as VertexId).collect();
    order.sort_by(|&a, &b| {
        data.row(a)
            .iter()
            .zip(data.row(b))
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(core::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let mut keep = alloc::vec![true; data.len()];
    for w in order.windows(2) {
        if data.row(w[0]) == data.row(w[1]) {
            keep[w[1] as usize] = false;
        }
    }
    let ids: Vec<VertexId> = (0..data.len() as VertexId)
        .filter(|&i| keep[i as usize])
        .collect();
    if ids.len() == data.len() {
        return Ok(data.clone());
    }
    data.subset(&ids)
}

/// `count` queries, each a data point (chosen uniformly with replacement)
/// moved in a uniformly random direction by a distance drawn uniformly from
/// `[0, radius]`. Returns the queries and their source ids.
pub fn perturbed_queries(
    data: &Dataset,
    count: usize,
    radius: f64,
    seed: u64,
) -> Result<(Dataset, Vec<VertexId>)> {
    if !(radius.is_finite() && radius >= 0.0) {
        return Err(Error::param("perturbation radius must be non-negative"));
    }
    let dim = data.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count * dim);
    let mut sources = Vec::with_capacity(count);
    let mut dir = alloc::vec![0.0f64; dim];
    for _ in 0..count {
        let src = rng.random_range(0..data.len() as VertexId);
        let norm = loop {
            for d in dir.iter_mut() {
                *d = StandardNormal.sample(&mut rng);
            }
            let norm = libm::sqrt(dir.iter().map(|d| d * d).sum::<f64>());
            if norm > 1e-12 {
                break norm;
            }
        };
        let r = rng.random::<f64>() * radius;
        for (x, d) in data.row(src).iter().zip(&dir) {
            out.push((f64::from(*x) + r * d / norm) as f32);
        }
        sources.push(src);
    }
    Ok((Dataset::new(dim, out)?, sources))
}
