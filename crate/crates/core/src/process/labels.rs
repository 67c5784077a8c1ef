use std::collections::BTreeSet;

use serde::Serialize;

use super::VertexId;

/// Type of a vertex with respect to the path and the stub structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Role {
    /// Not on the path (isolated or paired).
    OffPath,
    Stub,
    /// Path neighbor of the given stub root.
    StubNeighbor(VertexId),
    /// At path distance exactly 2 from a stub and not a stub neighbor.
    BlockedStructural,
    /// Free vertex held back so that the clear count is exact.
    BlockedArtificial,
    Clear,
}

impl Role {
    pub fn is_free(self) -> bool {
        matches!(self, Role::Clear | Role::BlockedArtificial)
    }
}

/// Split of the free path vertices into clear and artificially blocked.
///
/// Vertices are keyed by the order in which they joined the path. The
/// artificially blocked ones are always the most recently joined, so every
/// artificial key exceeds every clear key.
#[derive(Debug, Clone, Default)]
pub(crate) struct FreeLabels {
    clear: BTreeSet<u32>,
    artificial: BTreeSet<u32>,
}

impl FreeLabels {
    pub fn clear_len(&self) -> usize {
        self.clear.len()
    }

    pub fn artificial_len(&self) -> usize {
        self.artificial.len()
    }

    /// Inserts a newly free key; returns whether it landed in the clear set.
    pub fn insert(&mut self, key: u32) -> bool {
        match self.artificial.first() {
            Some(&lowest) if key > lowest => {
                self.artificial.insert(key);
                false
            }
            _ => {
                self.clear.insert(key);
                true
            }
        }
    }

    pub fn remove(&mut self, key: u32) {
        if !self.clear.remove(&key) {
            let removed = self.artificial.remove(&key);
            debug_assert!(removed);
        }
    }

    /// Moves boundary keys until exactly `target` are clear.
    ///
    /// Calls `relabel(key, now_clear)` for every key that changed side.
    pub fn rebalance(&mut self, target: usize, mut relabel: impl FnMut(u32, bool)) {
        debug_assert!(target <= self.clear.len() + self.artificial.len());
        while self.clear.len() > target {
            let key = self.clear.pop_last().expect("nonempty");
            self.artificial.insert(key);
            relabel(key, false);
        }
        while self.clear.len() < target {
            let key = self.artificial.pop_first().expect("enough free vertices");
            self.clear.insert(key);
            relabel(key, true);
        }
    }

    pub fn is_clear(&self, key: u32) -> bool {
        self.clear.contains(&key)
    }

    pub fn is_artificial(&self, key: u32) -> bool {
        self.artificial.contains(&key)
    }

    pub fn ordered(&self) -> bool {
        match (self.clear.last(), self.artificial.first()) {
            (Some(c), Some(a)) => c < a,
            _ => true,
        }
    }
}
