//! Doubly linked path over a fixed vertex set.

use super::VertexId;

pub(crate) const NIL: VertexId = VertexId::MAX;

/// The growing path, stored as `prev`/`next` links indexed by vertex.
///
/// Vertices only ever join the path; they never leave it. Insertion is
/// supported at the tail and between two adjacent path vertices.
#[derive(Debug, Clone)]
pub struct PathLinks {
    prev: Vec<VertexId>,
    next: Vec<VertexId>,
    on_path: Vec<bool>,
    head: VertexId,
    tail: VertexId,
    len: usize,
}

fn link(raw: VertexId) -> Option<VertexId> {
    (raw != NIL).then_some(raw)
}

impl PathLinks {
    pub fn new(n: usize) -> Self {
        Self {
            prev: vec![NIL; n],
            next: vec![NIL; n],
            on_path: vec![false; n],
            head: NIL,
            tail: NIL,
            len: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn head(&self) -> Option<VertexId> {
        link(self.head)
    }

    pub fn tail(&self) -> Option<VertexId> {
        link(self.tail)
    }

    pub fn prev(&self, v: VertexId) -> Option<VertexId> {
        link(self.prev[v as usize])
    }

    pub fn next(&self, v: VertexId) -> Option<VertexId> {
        link(self.next[v as usize])
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.on_path[v as usize]
    }

    pub fn are_adjacent(&self, a: VertexId, b: VertexId) -> bool {
        self.next(a) == Some(b) || self.prev(a) == Some(b)
    }

    /// Appends `v` after the current tail.
    pub fn push_back(&mut self, v: VertexId) {
        debug_assert!(!self.contains(v));
        let vi = v as usize;
        self.on_path[vi] = true;
        self.next[vi] = NIL;
        self.prev[vi] = self.tail;
        if self.tail == NIL {
            self.head = v;
        } else {
            self.next[self.tail as usize] = v;
        }
        self.tail = v;
        self.len += 1;
    }

    /// Replaces the path edge `{from, to}` by the path `from, inserted.., to`.
    ///
    /// `from` and `to` must be adjacent on the path, in either orientation.
    pub fn splice_between(&mut self, from: VertexId, to: VertexId, inserted: &[VertexId]) {
        debug_assert!(self.are_adjacent(from, to));
        if self.next(from) == Some(to) {
            let mut left = from;
            for &x in inserted {
                self.insert_after(left, x);
                left = x;
            }
        } else {
            // path reads `to, from`; walk it as `to, rev(inserted), from`
            let mut left = to;
            for &x in inserted.iter().rev() {
                self.insert_after(left, x);
                left = x;
            }
        }
    }

    fn insert_after(&mut self, left: VertexId, x: VertexId) {
        debug_assert!(!self.contains(x));
        let right = self.next[left as usize];
        let xi = x as usize;
        self.on_path[xi] = true;
        self.prev[xi] = left;
        self.next[xi] = right;
        self.next[left as usize] = x;
        if right == NIL {
            self.tail = x;
        } else {
            self.prev[right as usize] = x;
        }
        self.len += 1;
    }

    /// Vertices from head to tail.
    pub fn iter(&self) -> PathIter<'_> {
        PathIter {
            links: self,
            cursor: self.head,
            remaining: self.len,
        }
    }

    pub fn to_vec(&self) -> Vec<VertexId> {
        self.iter().collect()
    }

    /// Path vertices within distance `radius` of `v`, including `v`.
    pub(crate) fn window(&self, v: VertexId, radius: usize, out: &mut Vec<VertexId>) {
        out.push(v);
        let mut left = v;
        let mut right = v;
        for _ in 0..radius {
            if let Some(l) = self.prev(left) {
                out.push(l);
                left = l;
            }
            if let Some(r) = self.next(right) {
                out.push(r);
                right = r;
            }
        }
    }

    #[cfg(test)]
    pub(crate) fn raw_next_mut(&mut self) -> &mut Vec<VertexId> {
        &mut self.next
    }
}

pub struct PathIter<'a> {
    links: &'a PathLinks,
    cursor: VertexId,
    // bounds the walk even if links are corrupted
    remaining: usize,
}

impl Iterator for PathIter<'_> {
    type Item = VertexId;

    fn next(&mut self) -> Option<VertexId> {
        if self.cursor == NIL || self.remaining == 0 {
            return None;
        }
        let v = self.cursor;
        self.cursor = self.links.next[v as usize];
        self.remaining -= 1;
        Some(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_back_and_iterate() {
        let mut p = PathLinks::new(5);
        assert!(p.is_empty());
        p.push_back(3);
        assert_eq!(p.head(), Some(3));
        assert_eq!(p.tail(), Some(3));
        p.push_back(1);
        p.push_back(4);
        assert_eq!(p.to_vec(), vec![3, 1, 4]);
        assert_eq!(p.prev(1), Some(3));
        assert_eq!(p.next(4), None);
    }

    #[test]
    fn splice_forward_and_backward() {
        let mut p = PathLinks::new(8);
        for v in [0, 1, 2, 3] {
            p.push_back(v);
        }
        // forward orientation: 1 -> 2
        p.splice_between(1, 2, &[5, 6]);
        assert_eq!(p.to_vec(), vec![0, 1, 5, 6, 2, 3]);
        // backward orientation: from = 3, to = 2 (path reads 2, 3)
        p.splice_between(3, 2, &[7]);
        assert_eq!(p.to_vec(), vec![0, 1, 5, 6, 2, 7, 3]);
        p.splice_between(3, 7, &[4]);
        assert_eq!(p.to_vec(), vec![0, 1, 5, 6, 2, 7, 4, 3]);
        assert_eq!(p.tail(), Some(3));
        let back: Vec<_> = {
            let mut out = vec![];
            let mut c = p.tail();
            while let Some(v) = c {
                out.push(v);
                c = p.prev(v);
            }
            out
        };
        assert_eq!(back, vec![3, 4, 7, 2, 6, 5, 1, 0]);
    }

    #[test]
    fn window_clips_at_ends() {
        let mut p = PathLinks::new(6);
        for v in 0..6 {
            p.push_back(v);
        }
        let mut w = vec![];
        p.window(0, 2, &mut w);
        w.sort();
        assert_eq!(w, vec![0, 1, 2]);
        w.clear();
        p.window(3, 2, &mut w);
        w.sort();
        assert_eq!(w, vec![1, 2, 3, 4, 5]);
    }
}
