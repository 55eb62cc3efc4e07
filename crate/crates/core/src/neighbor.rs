use core::cmp::Ordering;

use crate::VertexId;

/// A vertex together with its distance to some reference point.
///
/// Ordering is by distance, then by id, so the lower id wins ties.
#[derive(Debug, Clone, Copy)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Neighbor {
    pub id: VertexId,
    pub distance: f32,
}

impl Neighbor {
    #[inline]
    pub fn new(id: VertexId, distance: f32) -> Self {
        Self { id, distance }
    }
}

impl PartialEq for Neighbor {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Neighbor {}

impl PartialOrd for Neighbor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Neighbor {
    #[inline]
    fn cmp(&self, other: &Self) -> Ordering {
        self.distance
            .total_cmp(&other.distance)
            .then(self.id.cmp(&other.id))
    }
}

/// Sorts ascending by `(distance, id)`.
pub fn sort_neighbors(list: &mut [Neighbor]) {
    list.sort_unstable();
}

/// Keeps the `k` smallest entries of `list`, sorted.
pub fn truncate_to_nearest(list: &mut alloc::vec::Vec<Neighbor>, k: usize) {
    if list.len() > k && k > 0 {
        list.select_nth_unstable(k - 1);
    }
    list.truncate(k);
    list.sort_unstable();
}
