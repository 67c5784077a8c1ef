//! Turns a Hamilton path into a Hamilton cycle with endpoint stubs.
//!
//! Each round a uniform vertex `v` is presented. If `v` is an endpoint
//! the two endpoints are joined directly. If the predecessor of `v` holds
//! a stub to the tail, joining `v` to the head closes the cycle
//! `head..pred(v), tail..v`; symmetrically for a successor holding a stub
//! to the head. Otherwise `v` gets a stub to the head or the tail, chosen
//! uniformly. Birthday-paradox reasoning gives `Theta(sqrt n)` rounds.

use serde::Serialize;
use thiserror::Error;

use crate::process::{Draw, ProcessState, VertexId};

const TO_HEAD: u8 = 1;
const TO_TAIL: u8 = 2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CloseError {
    #[error("closing needs n >= 3, got {0}")]
    TooSmall(usize),
    #[error("path covers {covered} of {n} vertices")]
    NotHamiltonian { covered: usize, n: usize },
}

/// Endpoint-stub bookkeeping over a fixed Hamilton path.
#[derive(Debug, Clone)]
pub struct ClosureState {
    order: Vec<VertexId>,
    pos: Vec<usize>,
    endstubs: Vec<u8>,
    rounds_used: u64,
    edges: Vec<(VertexId, VertexId)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosureOutcome {
    /// Cyclic vertex order; the last vertex is adjacent to the first.
    pub cycle: Vec<VertexId>,
    pub rounds_used: u64,
    /// Edges added while closing, endpoint stubs included.
    pub edges: Vec<(VertexId, VertexId)>,
}

impl ClosureState {
    pub fn new(order: Vec<VertexId>) -> Result<Self, CloseError> {
        let n = order.len();
        if n < 3 {
            return Err(CloseError::TooSmall(n));
        }
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v as usize] = i;
        }
        Ok(Self {
            order,
            pos,
            endstubs: vec![0; n],
            rounds_used: 0,
            edges: Vec::new(),
        })
    }

    pub fn rounds_used(&self) -> u64 {
        self.rounds_used
    }

    pub fn endstubs(&self, v: VertexId) -> (bool, bool) {
        let s = self.endstubs[v as usize];
        (s & TO_HEAD != 0, s & TO_TAIL != 0)
    }

    fn head(&self) -> VertexId {
        self.order[0]
    }

    fn tail(&self) -> VertexId {
        self.order[self.order.len() - 1]
    }

    /// Plays one round with presented vertex `v`; returns the cycle if it
    /// closed.
    pub fn present<D: Draw + ?Sized>(&mut self, v: VertexId, rng: &mut D) -> Option<Vec<VertexId>> {
        self.rounds_used += 1;
        let (head, tail) = (self.head(), self.tail());
        let i = self.pos[v as usize];
        let n = self.order.len();
        if v == head || v == tail {
            self.edges.push((head, tail));
            return Some(self.order.clone());
        }
        if self.endstubs[self.order[i - 1] as usize] & TO_TAIL != 0 {
            // head..pred(v), then tail back down to v
            self.edges.push((v, head));
            let mut cycle = self.order[..i].to_vec();
            cycle.extend(self.order[i..].iter().rev());
            return Some(cycle);
        }
        if self.endstubs[self.order[i + 1] as usize] & TO_HEAD != 0 {
            // head..v, then tail back down to succ(v)
            self.edges.push((v, tail));
            let mut cycle = self.order[..=i].to_vec();
            cycle.extend(self.order[i + 1..n].iter().rev());
            return Some(cycle);
        }
        let dir = if rng.index(2) == 0 { TO_HEAD } else { TO_TAIL };
        if self.endstubs[v as usize] & dir == 0 {
            self.endstubs[v as usize] |= dir;
            self.edges.push((v, if dir == TO_HEAD { head } else { tail }));
        }
        None
    }

    /// Presents uniform vertices until the cycle closes.
    pub fn run<D: Draw + ?Sized>(mut self, rng: &mut D) -> ClosureOutcome {
        let n = self.order.len();
        loop {
            let v = rng.index(n) as VertexId;
            if let Some(cycle) = self.present(v, rng) {
                return ClosureOutcome {
                    cycle,
                    rounds_used: self.rounds_used,
                    edges: self.edges,
                };
            }
        }
    }
}

/// Closes the Hamilton path held by `state`. Main-phase stub structures
/// are ignored.
pub fn close_cycle<D: Draw + ?Sized>(state: &ProcessState, rng: &mut D) -> Result<ClosureOutcome, CloseError> {
    let n = state.n();
    if n < 3 {
        return Err(CloseError::TooSmall(n));
    }
    if !state.is_hamilton_path() {
        return Err(CloseError::NotHamiltonian {
            covered: state.path().len(),
            n,
        });
    }
    Ok(ClosureState::new(state.path().to_vec())?.run(rng))
}
