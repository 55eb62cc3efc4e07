use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::VertexId;

/// Diameter, minimum pairwise distance, and their ratio (the aspect ratio).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DatasetStats {
    pub diameter: f64,
    pub min_dist: f64,
    pub aspect_ratio: f64,
}

/// Exact statistics by scanning all `n(n-1)/2` pairs.
///
/// Quadratic; meant for desk-scale data and tests.
pub fn compute_stats(data: &Dataset) -> Result<DatasetStats> {
    let n = data.len();
    if n < 2 {
        return Err(Error::param("statistics need at least two points"));
    }
    let mut diameter = 0f64;
    let mut min_dist = f64::INFINITY;
    let mut min_pair = (0, 1);
    for a in 0..n as VertexId {
        for b in a + 1..n as VertexId {
            let d = f64::from(data.distance(a, b));
            if d > diameter {
                diameter = d;
            }
            if d < min_dist {
                min_dist = d;
                min_pair = (a, b);
            }
        }
    }
    if min_dist <= 0.0 {
        return Err(Error::DuplicatePoints {
            first: min_pair.0,
            second: min_pair.1,
        });
    }
    Ok(DatasetStats {
        diameter,
        min_dist,
        aspect_ratio: diameter / min_dist,
    })
}
