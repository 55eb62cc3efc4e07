//! Bounded-degree directed adjacency structure and its binary encoding.
//!
//! Encoding (all little-endian): magic `ACNG`, format version `u32`,
//! `n: u64`, `max_degree: u32`, `entry_point: u64`, then for each vertex a
//! `u32` degree followed by that many `u32` neighbor ids.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::neighbor::Neighbor;
use crate::VertexId;

pub const MAGIC: [u8; 4] = *b"ACNG";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProximityGraph {
    max_degree: u32,
    entry_point: VertexId,
    adjacency: Vec<Vec<VertexId>>,
}

impl ProximityGraph {
    /// A graph on `n` vertices with no edges.
    pub fn empty(n: usize, max_degree: u32, entry_point: VertexId) -> Self {
        Self {
            max_degree,
            entry_point,
            adjacency: vec![Vec::new(); n],
        }
    }

    /// Builds a graph and checks every structural invariant.
    pub fn from_adjacency(
        adjacency: Vec<Vec<VertexId>>,
        max_degree: u32,
        entry_point: VertexId,
    ) -> Result<Self> {
        let g = Self {
            max_degree,
            entry_point,
            adjacency,
        };
        g.validate()?;
        Ok(g)
    }

    /// Every vertex linked to every other, each list sorted by distance.
    pub fn complete(data: &Dataset) -> Self {
        let n = data.len();
        let adjacency = (0..n as VertexId)
            .map(|p| {
                let mut list: Vec<Neighbor> = (0..n as VertexId)
                    .filter(|&q| q != p)
                    .map(|q| Neighbor::new(q, data.distance(p, q)))
                    .collect();
                list.sort_unstable();
                list.into_iter().map(|nb| nb.id).collect()
            })
            .collect();
        Self {
            max_degree: n.saturating_sub(1).max(1) as u32,
            entry_point: 0,
            adjacency,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.adjacency.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.adjacency.is_empty()
    }

    #[inline]
    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn set_max_degree(&mut self, max_degree: u32) {
        self.max_degree = max_degree;
    }

    #[inline]
    pub fn entry_point(&self) -> VertexId {
        self.entry_point
    }

    pub fn set_entry_point(&mut self, entry_point: VertexId) {
        self.entry_point = entry_point;
    }

    #[inline]
    pub fn neighbors(&self, u: VertexId) -> &[VertexId] {
        &self.adjacency[u as usize]
    }

    pub fn set_neighbors(&mut self, u: VertexId, neighbors: Vec<VertexId>) {
        self.adjacency[u as usize] = neighbors;
    }

    pub(crate) fn neighbors_mut(&mut self, u: VertexId) -> &mut Vec<VertexId> {
        &mut self.adjacency[u as usize]
    }

    pub fn adjacency(&self) -> &[Vec<VertexId>] {
        &self.adjacency
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adjacency[u as usize].contains(&v)
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }

    pub fn observed_max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Checks: entry point in range, ids in range, no self-loops, no
    /// duplicate out-neighbors, out-degree within `max_degree`.
    pub fn validate(&self) -> Result<()> {
        let n = self.len();
        if n == 0 {
            return Err(Error::param("graph has no vertices"));
        }
        if self.entry_point as usize >= n {
            return Err(Error::param(format!(
                "entry point {} out of range for {n} vertices",
                self.entry_point
            )));
        }
        let mut seen = vec![u32::MAX; n];
        for (u, list) in self.adjacency.iter().enumerate() {
            if list.len() > self.max_degree as usize {
                return Err(Error::param(format!(
                    "vertex {u} has out-degree {} above max_degree {}",
                    list.len(),
                    self.max_degree
                )));
            }
            for &v in list {
                if v as usize >= n {
                    return Err(Error::param(format!(
                        "edge ({u}, {v}) leaves the vertex range"
                    )));
                }
                if v as usize == u {
                    return Err(Error::param(format!("self-loop at vertex {u}")));
                }
                if seen[v as usize] == u as u32 {
                    return Err(Error::param(format!("duplicate edge ({u}, {v})")));
                }
                seen[v as usize] = u as u32;
            }
        }
        Ok(())
    }

    /// True when every list is sorted ascending by distance to its owner,
    /// ties broken by id.
    pub fn is_distance_sorted(&self, data: &Dataset) -> bool {
        self.adjacency.iter().enumerate().all(|(u, list)| {
            list.windows(2).all(|w| {
                let a = Neighbor::new(w[0], data.distance(u as VertexId, w[0]));
                let b = Neighbor::new(w[1], data.distance(u as VertexId, w[1]));
                a < b
            })
        })
    }

    /// Marks every vertex reachable from `start` by an iterative DFS.
    pub fn reachable_from(&self, start: VertexId) -> Vec<bool> {
        let mut mark = vec![false; self.len()];
        self.mark_reachable(start, &mut mark);
        mark
    }

    /// Extends `mark` with everything reachable from `start` that is not
    /// already marked. Returns how many vertices were newly marked.
    pub fn mark_reachable(&self, start: VertexId, mark: &mut [bool]) -> usize {
        if mark[start as usize] {
            return 0;
        }
        let mut stack = vec![start];
        mark[start as usize] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in self.neighbors(u) {
                if !mark[v as usize] {
                    mark[v as usize] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(28 + 4 * (self.len() + self.edge_count()));
        out.extend_from_slice(&MAGIC);
        out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        out.extend_from_slice(&(self.len() as u64).to_le_bytes());
        out.extend_from_slice(&self.max_degree.to_le_bytes());
        out.extend_from_slice(&u64::from(self.entry_point).to_le_bytes());
        for list in &self.adjacency {
            out.extend_from_slice(&(list.len() as u32).to_le_bytes());
            for &v in list {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        out
    }

    /// Decodes and validates a graph. Errors carry the byte offset.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4)? != MAGIC {
            return Err(Error::Format {
                offset: 0,
                reason: "bad magic, expected ACNG".to_string(),
            });
        }
        let version_at = r.pos;
        let version = r.u32()?;
        if version != FORMAT_VERSION {
            return Err(r.err_at(version_at, format!("unsupported format version {version}")));
        }
        let n_at = r.pos;
        let n = r.u64()?;
        if n == 0 || n > u64::from(u32::MAX) {
            return Err(r.err_at(n_at, format!("vertex count {n} out of range")));
        }
        let max_degree = r.u32()?;
        let entry_at = r.pos;
        let entry = r.u64()?;
        if entry >= n {
            return Err(r.err_at(entry_at, format!("entry point {entry} out of range")));
        }
        let n = n as usize;
        // Each vertex needs at least 4 bytes; reject absurd counts before allocating.
        if (bytes.len() - r.pos) / 4 < n {
            return Err(r.err_at(n_at, format!("vertex count {n} exceeds the data present")));
        }
        let mut adjacency = Vec::with_capacity(n);
        for _ in 0..n {
            let deg_at = r.pos;
            let degree = r.u32()? as usize;
            if degree > max_degree as usize {
                return Err(r.err_at(
                    deg_at,
                    format!("degree {degree} above max_degree {max_degree}"),
                ));
            }
            let mut list = Vec::with_capacity(degree);
            for _ in 0..degree {
                let id_at = r.pos;
                let v = r.u32()?;
                if v as usize >= n {
                    return Err(r.err_at(id_at, format!("neighbor id {v} out of range")));
                }
                list.push(v);
            }
            adjacency.push(list);
        }
        if r.pos != bytes.len() {
            return Err(r.err_at(r.pos, "trailing bytes after last vertex".to_string()));
        }
        Self::from_adjacency(adjacency, max_degree, entry as VertexId).map_err(|e| Error::Format {
            offset: 0,
            reason: e.to_string(),
        })
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn err_at(&self, at: usize, reason: alloc::string::String) -> Error {
        Error::Format {
            offset: at as u64,
            reason,
        }
    }

    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        if self.bytes.len() - self.pos < len {
            return Err(self.err_at(
                self.pos,
                format!("unexpected end of data, wanted {len} bytes"),
            ));
        }
        let s = &self.bytes[self.pos..self.pos + len];
        self.pos += len;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        let b = self.take(4)?;
        Ok(u32::from_le_bytes([b[0], b[1], b[2], b[3]]))
    }

    fn u64(&mut self) -> Result<u64> {
        let b = self.take(8)?;
        let mut a = [0u8; 8];
        a.copy_from_slice(b);
        Ok(u64::from_le_bytes(a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ProximityGraph {
        ProximityGraph::from_adjacency(vec![vec![1, 2], vec![2], vec![]], 2, 0).unwrap()
    }

    #[test]
    fn header_layout() {
        let bytes = small().to_bytes();
        assert_eq!(&bytes[0..4], b"ACNG");
        assert_eq!(&bytes[4..8], &1u32.to_le_bytes());
        assert_eq!(&bytes[8..16], &3u64.to_le_bytes());
        assert_eq!(&bytes[16..20], &2u32.to_le_bytes());
        assert_eq!(&bytes[20..28], &0u64.to_le_bytes());
        assert_eq!(&bytes[28..32], &2u32.to_le_bytes());
        assert_eq!(bytes.len(), 28 + 4 * 3 + 4 * 3);
    }

    #[test]
    fn invariants_are_enforced() {
        assert!(ProximityGraph::from_adjacency(vec![vec![0]], 1, 0).is_err());
        assert!(ProximityGraph::from_adjacency(vec![vec![1, 1], vec![]], 2, 0).is_err());
        assert!(ProximityGraph::from_adjacency(vec![vec![1], vec![0]], 0, 0).is_err());
        assert!(ProximityGraph::from_adjacency(vec![vec![1], vec![0]], 1, 2).is_err());
        assert!(ProximityGraph::from_adjacency(vec![vec![5], vec![0]], 1, 0).is_err());
    }

    #[test]
    fn decode_reports_offsets() {
        let bytes = small().to_bytes();
        let err = ProximityGraph::from_bytes(&bytes[..bytes.len() - 2]).unwrap_err();
        assert!(matches!(err, Error::Format { offset, .. } if offset == 48));
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(
            ProximityGraph::from_bytes(&bad),
            Err(Error::Format { offset: 0, .. })
        ));
        let mut trailing = bytes.clone();
        trailing.push(0);
        assert!(ProximityGraph::from_bytes(&trailing).is_err());
        let mut huge = bytes;
        huge[8..16].copy_from_slice(&u64::MAX.to_le_bytes());
        assert!(matches!(
            ProximityGraph::from_bytes(&huge),
            Err(Error::Format { offset: 8, .. })
        ));
    }

    #[test]
    fn reachability() {
        let g = small();
        assert_eq!(g.reachable_from(0), vec![true, true, true]);
        assert_eq!(g.reachable_from(1), vec![false, true, true]);
        assert_eq!(g.reachable_from(2), vec![false, false, true]);
    }
}
