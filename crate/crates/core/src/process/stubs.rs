use serde::Serialize;

use super::VertexId;

/// A reserved edge from a path vertex (`root`) to a non-path vertex (`end`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct StubEdge {
    pub root: VertexId,
    pub end: VertexId,
}

type EdgeId = u32;

/// Stubedges indexed from both ends.
///
/// Each live edge id appears once in `by_root[root]` and once in
/// `by_end[end]`. Slots of removed edges are recycled through `free`.
#[derive(Debug, Clone)]
pub struct StubEdges {
    slots: Vec<Option<StubEdge>>,
    free: Vec<EdgeId>,
    by_root: Vec<Vec<EdgeId>>,
    by_end: Vec<Vec<EdgeId>>,
    live: usize,
}

impl StubEdges {
    pub fn new(n: usize) -> Self {
        Self {
            slots: Vec::new(),
            free: Vec::new(),
            by_root: vec![Vec::new(); n],
            by_end: vec![Vec::new(); n],
            live: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    pub fn degree(&self, root: VertexId) -> usize {
        self.by_root[root as usize].len()
    }

    /// Number of stubedges ending at `end`.
    pub fn in_degree(&self, end: VertexId) -> usize {
        self.by_end[end as usize].len()
    }

    pub fn insert(&mut self, edge: StubEdge) {
        let id = match self.free.pop() {
            Some(id) => {
                self.slots[id as usize] = Some(edge);
                id
            }
            None => {
                self.slots.push(Some(edge));
                (self.slots.len() - 1) as EdgeId
            }
        };
        self.by_root[edge.root as usize].push(id);
        self.by_end[edge.end as usize].push(id);
        self.live += 1;
    }

    /// The `index`-th edge of `root`, in the root's stable edge order.
    pub fn edge_of_root(&self, root: VertexId, index: usize) -> StubEdge {
        let id = self.by_root[root as usize][index];
        self.slots[id as usize].expect("indexed edge is live")
    }

    pub fn edges_of_root(&self, root: VertexId) -> impl Iterator<Item = StubEdge> + '_ {
        self.by_root[root as usize]
            .iter()
            .map(|&id| self.slots[id as usize].expect("indexed edge is live"))
    }

    pub fn edges_into(&self, end: VertexId) -> impl Iterator<Item = StubEdge> + '_ {
        self.by_end[end as usize]
            .iter()
            .map(|&id| self.slots[id as usize].expect("indexed edge is live"))
    }

    /// Removes the `index`-th edge of `root`.
    pub fn remove_root_edge(&mut self, root: VertexId, index: usize) -> StubEdge {
        let id = self.by_root[root as usize][index];
        self.remove_id(id)
    }

    /// Removes the oldest remaining edge ending at `end`.
    pub fn pop_into(&mut self, end: VertexId) -> Option<StubEdge> {
        let id = *self.by_end[end as usize].first()?;
        Some(self.remove_id(id))
    }

    /// Removes every edge ending at `end`, in index order.
    pub fn drain_into(&mut self, end: VertexId, removed: &mut Vec<StubEdge>) {
        while let Some(e) = self.pop_into(end) {
            removed.push(e);
        }
    }

    fn remove_id(&mut self, id: EdgeId) -> StubEdge {
        let edge = self.slots[id as usize].take().expect("edge is live");
        Self::unlink(&mut self.by_root[edge.root as usize], id);
        Self::unlink(&mut self.by_end[edge.end as usize], id);
        self.free.push(id);
        self.live -= 1;
        edge
    }

    // order-preserving so that root edge indices stay stable
    fn unlink(list: &mut Vec<EdgeId>, id: EdgeId) {
        let pos = list.iter().position(|&x| x == id).expect("edge indexed");
        list.remove(pos);
    }

    /// All live edges in slot order.
    pub fn iter(&self) -> impl Iterator<Item = StubEdge> + '_ {
        self.slots.iter().flatten().copied()
    }

    /// Checks that both indexes describe exactly the live slots.
    pub(crate) fn index_mismatches(&self) -> Vec<String> {
        let mut problems = Vec::new();
        let mut seen_root = vec![0u8; self.slots.len()];
        let mut seen_end = vec![0u8; self.slots.len()];
        for (v, ids) in self.by_root.iter().enumerate() {
            for &id in ids {
                match self.slots.get(id as usize).copied().flatten() {
                    Some(e) if e.root as usize == v => seen_root[id as usize] += 1,
                    _ => problems.push(format!("by-root index of {v} lists stale edge {id}")),
                }
            }
        }
        for (v, ids) in self.by_end.iter().enumerate() {
            for &id in ids {
                match self.slots.get(id as usize).copied().flatten() {
                    Some(e) if e.end as usize == v => seen_end[id as usize] += 1,
                    _ => problems.push(format!("by-end index of {v} lists stale edge {id}")),
                }
            }
        }
        for (id, slot) in self.slots.iter().enumerate() {
            if let Some(e) = slot {
                if seen_root[id] != 1 || seen_end[id] != 1 {
                    problems.push(format!(
                        "edge {}->{} indexed {} times by root, {} by end",
                        e.root, e.end, seen_root[id], seen_end[id]
                    ));
                }
            }
        }
        if self.iter().count() != self.live {
            problems.push(format!("live count {} disagrees with slots", self.live));
        }
        problems
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_indexes_track_insert_and_remove() {
        let mut s = StubEdges::new(6);
        s.insert(StubEdge { root: 0, end: 4 });
        s.insert(StubEdge { root: 0, end: 5 });
        s.insert(StubEdge { root: 2, end: 4 });
        assert_eq!(s.degree(0), 2);
        assert_eq!(s.in_degree(4), 2);

        let mut removed = vec![];
        s.drain_into(4, &mut removed);
        assert_eq!(removed.len(), 2);
        assert_eq!(s.degree(0), 1);
        assert_eq!(s.degree(2), 0);
        assert_eq!(s.edge_of_root(0, 0), StubEdge { root: 0, end: 5 });
        assert!(s.index_mismatches().is_empty());

        // slot reuse
        s.insert(StubEdge { root: 1, end: 3 });
        assert_eq!(s.len(), 2);
        assert!(s.index_mismatches().is_empty());
    }

    #[test]
    fn root_edge_order_is_stable_under_removal() {
        let mut s = StubEdges::new(8);
        for end in [5, 6, 7] {
            s.insert(StubEdge { root: 1, end });
        }
        let e = s.remove_root_edge(1, 0);
        assert_eq!(e.end, 5);
        let ends: Vec<_> = s.edges_of_root(1).map(|e| e.end).collect();
        assert_eq!(ends, vec![6, 7]);
    }

    #[test]
    fn drain_of_untargeted_vertex_is_noop() {
        let mut s = StubEdges::new(3);
        s.insert(StubEdge { root: 0, end: 1 });
        let mut removed = vec![];
        s.drain_into(2, &mut removed);
        assert!(removed.is_empty());
        assert_eq!(s.len(), 1);
    }
}
