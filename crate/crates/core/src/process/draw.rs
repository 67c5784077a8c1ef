use rand::Rng;

use super::VertexId;

/// Source of the uniform index choices a round makes.
///
/// Every random choice in the process is "pick one of `len` options".
/// Any [`Rng`] is a `Draw`; [`Scripted`] replays fixed answers so that
/// every branch of a round can be enumerated.
pub trait Draw {
    fn index(&mut self, len: usize) -> usize;
}

impl<R: Rng + ?Sized> Draw for R {
    fn index(&mut self, len: usize) -> usize {
        self.gen_range(0..len)
    }
}

/// Replays a fixed list of choices, then answers 0.
#[derive(Debug, Clone, Default)]
pub struct Scripted {
    picks: Vec<usize>,
    cursor: usize,
}

impl Scripted {
    pub fn new(picks: Vec<usize>) -> Self {
        Self { picks, cursor: 0 }
    }
}

impl Draw for Scripted {
    fn index(&mut self, len: usize) -> usize {
        let pick = self.picks.get(self.cursor).copied().unwrap_or(0);
        self.cursor += 1;
        assert!(pick < len, "scripted pick {pick} out of range {len}");
        pick
    }
}

/// Vertex set with O(1) insert, remove and indexed access.
#[derive(Debug, Clone)]
pub(crate) struct IndexedSet {
    items: Vec<VertexId>,
    slot: Vec<u32>,
}

const ABSENT: u32 = u32::MAX;

impl IndexedSet {
    pub fn full(n: usize) -> Self {
        Self {
            items: (0..n as VertexId).collect(),
            slot: (0..n as u32).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.slot[v as usize] != ABSENT
    }

    pub fn get(&self, i: usize) -> VertexId {
        self.items[i]
    }

    pub fn remove(&mut self, v: VertexId) {
        let at = self.slot[v as usize];
        debug_assert_ne!(at, ABSENT);
        let last = *self.items.last().expect("nonempty");
        self.items.swap_remove(at as usize);
        if last != v {
            self.slot[last as usize] = at;
        }
        self.slot[v as usize] = ABSENT;
    }
}
