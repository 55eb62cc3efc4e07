//! Dense vector storage and the distance function.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::VertexId;

/// Distance function over vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Metric {
    #[default]
    EuclideanL2,
}

impl Metric {
    /// Distance between two equal-length vectors.
    ///
    /// Lengths are only checked in debug builds; use [`distance`] for a
    /// checked call. Accumulates in `f64` and narrows once at the end, so
    /// the result is bitwise symmetric in its arguments.
    #[inline]
    pub fn eval(self, a: &[f32], b: &[f32]) -> f32 {
        debug_assert_eq!(a.len(), b.len());
        match self {
            Metric::EuclideanL2 => l2(a, b),
        }
    }
}

const LANES: usize = 16;

#[inline]
fn l2(a: &[f32], b: &[f32]) -> f32 {
    // Independent f64 lanes so the loop vectorizes without reassociation.
    let mut acc = [0f64; LANES];
    let chunks_a = a.chunks_exact(LANES);
    let chunks_b = b.chunks_exact(LANES);
    let (rest_a, rest_b) = (chunks_a.remainder(), chunks_b.remainder());
    for (x, y) in chunks_a.zip(chunks_b) {
        for lane in 0..LANES {
            let d = f64::from(x[lane]) - f64::from(y[lane]);
            acc[lane] += d * d;
        }
    }
    let mut sum = acc.iter().sum::<f64>();
    for (x, y) in rest_a.iter().zip(rest_b) {
        let d = f64::from(*x) - f64::from(*y);
        sum += d * d;
    }
    libm::sqrt(sum) as f32
}

/// Checked distance between two vectors.
pub fn distance(a: &[f32], b: &[f32], metric: Metric) -> Result<f32> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(metric.eval(a, b))
}

/// Row-major store of `n` vectors of a fixed dimension.
///
/// Rows are addressed by [`VertexId`] `0..n`. Every component is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    dim: usize,
    data: Vec<f32>,
    metric: Metric,
}

impl Dataset {
    pub fn new(dim: usize, data: Vec<f32>) -> Result<Self> {
        Self::with_metric(dim, data, Metric::EuclideanL2)
    }

    pub fn with_metric(dim: usize, data: Vec<f32>, metric: Metric) -> Result<Self> {
        if dim == 0 {
            return Err(Error::param("dimension must be positive"));
        }
        if data.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if data.len() % dim != 0 {
            return Err(Error::RaggedData {
                len: data.len(),
                dim,
            });
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / dim,
                col: pos % dim,
            });
        }
        Ok(Self { dim, data, metric })
    }

    pub fn from_rows<R: AsRef<[f32]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut data = Vec::with_capacity(rows.len() * dim);
        for row in rows {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(dim, data)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    /// Always false: construction rejects empty data.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn metric(&self) -> Metric {
        self.metric
    }

    #[inline]
    pub fn row(&self, id: VertexId) -> &[f32] {
        let start = id as usize * self.dim;
        &self.data[start..start + self.dim]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f32]> + '_ {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_slice(&self) -> &[f32] {
        &self.data
    }

    /// Distance between two stored rows.
    #[inline]
    pub fn distance(&self, a: VertexId, b: VertexId) -> f32 {
        self.metric.eval(self.row(a), self.row(b))
    }

    /// Distance from a stored row to an external vector of matching dimension.
    #[inline]
    pub fn distance_to(&self, a: VertexId, query: &[f32]) -> f32 {
        self.metric.eval(self.row(a), query)
    }

    pub fn check_query(&self, query: &[f32]) -> Result<()> {
        if query.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: query.len(),
            });
        }
        Ok(())
    }

    /// Fails with [`Error::DuplicatePoints`] if two rows are identical.
    ///
    /// Sorts row indices lexicographically, so this is `O(n log n · dim)`.
    pub fn ensure_distinct(&self) -> Result<()> {
        let mut order: Vec<VertexId> = (0..self.len() as VertexId).collect();
        let cmp_rows = |a: &VertexId, b: &VertexId| -> Ordering {
            for (x, y) in self.row(*a).iter().zip(self.row(*b)) {
                // Finite by construction; -0.0 and 0.0 compare equal here.
                match x.partial_cmp(y) {
                    Some(Ordering::Equal) => {}
                    Some(o) => return o,
                    None => unreachable!("non-finite component"),
                }
            }
            Ordering::Equal
        };
        order.sort_unstable_by(|a, b| cmp_rows(a, b).then(a.cmp(b)));
        for pair in order.windows(2) {
            if cmp_rows(&pair[0], &pair[1]) == Ordering::Equal {
                let (first, second) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
                return Err(Error::DuplicatePoints { first, second });
            }
        }
        Ok(())
    }

    /// Component-wise mean, accumulated in `f64`.
    pub fn centroid(&self) -> Vec<f32> {
        let mut acc = alloc::vec![0f64; self.dim];
        for row in self.rows() {
            for (a, x) in acc.iter_mut().zip(row) {
                *a += f64::from(*x);
            }
        }
        let n = self.len() as f64;
        acc.into_iter().map(|a| (a / n) as f32).collect()
    }

    /// A copy with every component multiplied by `factor`.
    ///
    /// Used to normalize distances so the minimum pairwise distance is 1.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let data = self
            .data
            .iter()
            .map(|x| (f64::from(*x) * factor) as f32)
            .collect();
        Self::with_metric(self.dim, data, self.metric)
    }

    /// A new dataset holding the listed rows, in order.
    pub fn subset(&self, ids: &[VertexId]) -> Result<Self> {
        let mut data = Vec::with_capacity(ids.len() * self.dim);
        for &id in ids {
            data.extend_from_slice(self.row(id));
        }
        Self::with_metric(self.dim, data, self.metric)
    }
}
