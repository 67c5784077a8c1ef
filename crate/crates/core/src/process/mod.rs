//! Exact state of the paired-stub strategy and its one-round transitions.
//!
//! Each round a uniform vertex is presented and exactly one case applies:
//!
//! | case | presented vertex                         | action                                   |
//! |------|------------------------------------------|------------------------------------------|
//! | C1   | clear path vertex                        | becomes a 1-stub                         |
//! | C2   | stub of degree `i < cap`                 | gains a stubedge                         |
//! | C3   | stub neighbor of root `u`                | inserts a stubend (or its pair) into the path |
//! | C4   | blocked, or stub at the cap              | nothing                                  |
//! | C5   | isolated (and another isolated exists)   | pairs with a random isolated vertex      |
//! | C6   | paired                                   | pair appended to the tail                |
//!
//! `Fallback` appends a lone isolated vertex to the tail; it also covers
//! every isolated presentation when pairing is disabled.
//!
//! Labels are maintained so that stubs are at path distance at least 3
//! from each other, nothing within distance 2 of a stub is clear, and the
//! number of clear vertices is exactly `max(0, P - 5S)`.

mod draw;
mod labels;
mod path;
mod stubs;

use serde::Serialize;
use thiserror::Error;

pub use draw::{Draw, Scripted};
pub use labels::Role;
pub use path::{PathIter, PathLinks};
pub use stubs::{StubEdge, StubEdges};

use crate::trajectory::TrajectoryRow;
use draw::IndexedSet;
use labels::FreeLabels;
use path::NIL;

pub type VertexId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum StopMode {
    /// Stop once the path holds at least `(1 - epsilon) n` vertices.
    MainPhase { epsilon: f64 },
    /// Run until the path is Hamiltonian.
    FullCycle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Config {
    pub n: usize,
    pub cap: u8,
    pub pairing_enabled: bool,
    pub stop_mode: StopMode,
    pub seed: u64,
}

impl Config {
    /// Cap 3, pairing on, full-cycle mode.
    pub fn new(n: usize, seed: u64) -> Self {
        Self {
            n,
            cap: 3,
            pairing_enabled: true,
            stop_mode: StopMode::FullCycle,
            seed,
        }
    }

    pub fn with_cap(mut self, cap: u8) -> Self {
        self.cap = cap;
        self
    }

    pub fn with_pairing(mut self, on: bool) -> Self {
        self.pairing_enabled = on;
        self
    }

    pub fn with_stop_mode(mut self, mode: StopMode) -> Self {
        self.stop_mode = mode;
        self
    }

    pub fn validate(&self) -> Result<(), ProcessError> {
        if self.n == 0 {
            return Err(ProcessError::EmptyVertexSet);
        }
        if self.n >= VertexId::MAX as usize {
            return Err(ProcessError::TooLarge(self.n));
        }
        if !(2..=3).contains(&self.cap) {
            return Err(ProcessError::BadCap(self.cap));
        }
        match self.stop_mode {
            StopMode::MainPhase { epsilon } if !(epsilon > 0.0 && epsilon < 1.0) => {
                Err(ProcessError::BadEpsilon(epsilon))
            }
            StopMode::FullCycle if self.n < 3 => Err(ProcessError::TooSmallForCycle(self.n)),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProcessError {
    #[error("vertex set must be nonempty")]
    EmptyVertexSet,
    #[error("n = {0} does not fit the vertex id type")]
    TooLarge(usize),
    #[error("stub cap must be 2 or 3, got {0}")]
    BadCap(u8),
    #[error("epsilon must lie in (0, 1), got {0}")]
    BadEpsilon(f64),
    #[error("a Hamilton cycle needs n >= 3, got n = {0}")]
    TooSmallForCycle(usize),
    #[error("process already finished")]
    Finished,
    #[error("vertex {0} is out of range")]
    VertexOutOfRange(VertexId),
    #[error("vertex {v} does not satisfy the precondition of {case:?}")]
    WrongCase { v: VertexId, case: Case },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Case {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    Fallback,
}

/// Off-path status of a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexStatus {
    OnPath,
    Isolated,
    Paired(VertexId),
}

/// The six tracked counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Counters {
    pub p: usize,
    pub v1: usize,
    pub v2: usize,
    pub s1: usize,
    pub s2: usize,
    pub s3: usize,
}

impl Counters {
    pub fn stubs(&self) -> usize {
        self.s1 + self.s2 + self.s3
    }

    pub fn nonpath(&self) -> usize {
        self.v1 + self.v2
    }

    pub fn as_array(&self) -> [usize; 6] {
        [self.p, self.v1, self.v2, self.s1, self.s2, self.s3]
    }

    pub fn delta_to(&self, after: &Counters) -> CounterDelta {
        let d = |a: usize, b: usize| b as i64 - a as i64;
        CounterDelta {
            p: d(self.p, after.p),
            v1: d(self.v1, after.v1),
            v2: d(self.v2, after.v2),
            s1: d(self.s1, after.s1),
            s2: d(self.s2, after.s2),
            s3: d(self.s3, after.s3),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct CounterDelta {
    pub p: i64,
    pub v1: i64,
    pub v2: i64,
    pub s1: i64,
    pub s2: i64,
    pub s3: i64,
}

impl CounterDelta {
    pub fn as_array(&self) -> [i64; 6] {
        [self.p, self.v1, self.v2, self.s1, self.s2, self.s3]
    }

    pub fn is_zero(&self) -> bool {
        self.as_array().iter().all(|&x| x == 0)
    }
}

/// Which targets a deletion cascade hit, for stubend uniformity checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum HitClass {
    /// Pair appended: targets are both pair members.
    C6,
    /// Stub used, stubend isolated: target is the stubend.
    C3Isolated,
    /// Stub used, stubend paired: targets are the stubend and its partner.
    C3Paired,
}

impl HitClass {
    /// Number of non-path vertices that count as a hit.
    pub fn targets(self) -> usize {
        match self {
            HitClass::C3Isolated => 1,
            HitClass::C6 | HitClass::C3Paired => 2,
        }
    }
}

/// Per-event tally of how many surviving stubedges pointed at the targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StubHits {
    pub class: HitClass,
    /// Non-path vertex count before the round.
    pub nonpath: usize,
    /// Stubedges examined (all live edges, minus the consumed one for C3).
    pub trials: usize,
    pub hits: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EventRecord {
    pub t: u64,
    pub v: VertexId,
    pub case: Case,
    pub delta: CounterDelta,
    /// C1/C2: end of the new stubedge. C3: the used stubend `w`.
    pub stubend: Option<VertexId>,
    /// C5/C6: the pair partner of `v`. C3: partner of `w`, if paired.
    pub partner: Option<VertexId>,
    /// C3: the stub root whose edge was used.
    pub root: Option<VertexId>,
    pub created: Option<StubEdge>,
    /// Stubedges removed because their end joined the path.
    pub deleted: Vec<StubEdge>,
    pub stub_hits: Option<StubHits>,
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct EventLogLine {
    t: u64,
    v: VertexId,
    case: Case,
    dP: i64,
    dV1: i64,
    dV2: i64,
    dS1: i64,
    dS2: i64,
    dS3: i64,
}

impl EventRecord {
    fn new(t: u64, v: VertexId, case: Case) -> Self {
        Self {
            t,
            v,
            case,
            delta: CounterDelta::default(),
            stubend: None,
            partner: None,
            root: None,
            created: None,
            deleted: Vec::new(),
            stub_hits: None,
        }
    }

    /// One-line JSON for the debug event log.
    pub fn log_line(&self) -> String {
        let d = self.delta;
        serde_json::to_string(&EventLogLine {
            t: self.t,
            v: self.v,
            case: self.case,
            dP: d.p,
            dV1: d.v1,
            dV2: d.v2,
            dS1: d.s1,
            dS2: d.s2,
            dS3: d.s3,
        })
        .expect("plain struct serializes")
    }
}

#[derive(Debug, Clone)]
pub struct ProcessState {
    config: Config,
    t: u64,
    path: PathLinks,
    partner: Vec<VertexId>,
    nonpath: IndexedSet,
    isolated: IndexedSet,
    stubs: StubEdges,
    // s_count[i] = number of roots with stub degree i, i in 1..=3
    s_count: [usize; 4],
    roles: Vec<Role>,
    join_seq: Vec<u32>,
    by_seq: Vec<VertexId>,
    free: FreeLabels,
    graph_edges: Vec<(VertexId, VertexId)>,
}

impl ProcessState {
    pub fn new(config: Config) -> Result<Self, ProcessError> {
        config.validate()?;
        let n = config.n;
        Ok(Self {
            config,
            t: 0,
            path: PathLinks::new(n),
            partner: vec![NIL; n],
            nonpath: IndexedSet::full(n),
            isolated: IndexedSet::full(n),
            stubs: StubEdges::new(n),
            s_count: [0; 4],
            roles: vec![Role::OffPath; n],
            join_seq: vec![NIL; n],
            by_seq: Vec::with_capacity(n),
            free: FreeLabels::default(),
            graph_edges: Vec::new(),
        })
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    pub fn n(&self) -> usize {
        self.config.n
    }

    /// Rounds played so far.
    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn counters(&self) -> Counters {
        let v1 = self.isolated.len();
        Counters {
            p: self.path.len(),
            v1,
            v2: self.nonpath.len() - v1,
            s1: self.s_count[1],
            s2: self.s_count[2],
            s3: self.s_count[3],
        }
    }

    pub fn path(&self) -> &PathLinks {
        &self.path
    }

    pub fn stub_edges(&self) -> &StubEdges {
        &self.stubs
    }

    pub fn role(&self, v: VertexId) -> Role {
        self.roles[v as usize]
    }

    pub fn stub_degree(&self, v: VertexId) -> usize {
        self.stubs.degree(v)
    }

    pub fn status(&self, v: VertexId) -> VertexStatus {
        if self.path.contains(v) {
            VertexStatus::OnPath
        } else if self.partner[v as usize] != NIL {
            VertexStatus::Paired(self.partner[v as usize])
        } else {
            VertexStatus::Isolated
        }
    }

    /// Every graph edge added so far, one per edge-creating round.
    pub fn graph_edges(&self) -> &[(VertexId, VertexId)] {
        &self.graph_edges
    }

    pub fn clear_count(&self) -> usize {
        self.free.clear_len()
    }

    pub fn artificial_count(&self) -> usize {
        self.free.artificial_len()
    }

    /// Order in which `v` joined the path, if it has.
    pub fn join_order(&self, v: VertexId) -> Option<u32> {
        let s = self.join_seq[v as usize];
        (s != NIL).then_some(s)
    }

    pub(crate) fn free_labels_ordered(&self) -> bool {
        self.free.ordered()
    }

    pub(crate) fn free_label_of(&self, v: VertexId) -> Option<Role> {
        let key = self.join_order(v)?;
        if self.free.is_clear(key) {
            Some(Role::Clear)
        } else if self.free.is_artificial(key) {
            Some(Role::BlockedArtificial)
        } else {
            None
        }
    }

    /// Target clear count `max(0, P - 5S)`.
    pub fn clear_target(&self) -> usize {
        let c = self.counters();
        c.p.saturating_sub(5 * c.stubs())
    }

    pub fn is_finished(&self) -> bool {
        let p = self.path.len();
        match self.config.stop_mode {
            StopMode::FullCycle => p == self.n(),
            StopMode::MainPhase { epsilon } => p as f64 >= (1.0 - epsilon) * self.n() as f64,
        }
    }

    pub fn is_hamilton_path(&self) -> bool {
        self.path.len() == self.n()
    }

    pub fn trajectory_row(&self) -> TrajectoryRow {
        TrajectoryRow::from_counters(self.t, self.n(), &self.counters())
    }

    /// Case that presenting `v` would trigger.
    pub fn classify(&self, v: VertexId) -> Case {
        match self.status(v) {
            VertexStatus::Isolated => {
                if self.config.pairing_enabled && self.isolated.len() >= 2 {
                    Case::C5
                } else {
                    Case::Fallback
                }
            }
            VertexStatus::Paired(_) => Case::C6,
            VertexStatus::OnPath => match self.roles[v as usize] {
                Role::Clear => Case::C1,
                Role::Stub if self.stubs.degree(v) < self.config.cap as usize => Case::C2,
                Role::StubNeighbor(_) => Case::C3,
                _ => Case::C4,
            },
        }
    }

    /// Plays one round: presents a uniform vertex and applies its case.
    pub fn step<D: Draw + ?Sized>(&mut self, rng: &mut D) -> Result<EventRecord, ProcessError> {
        if self.is_finished() {
            return Err(ProcessError::Finished);
        }
        let v = rng.index(self.n()) as VertexId;
        self.t += 1;
        self.present(v, rng)
    }

    /// Applies the case for `v` without advancing the round clock.
    pub fn present<D: Draw + ?Sized>(
        &mut self,
        v: VertexId,
        rng: &mut D,
    ) -> Result<EventRecord, ProcessError> {
        if v as usize >= self.n() {
            return Err(ProcessError::VertexOutOfRange(v));
        }
        match self.classify(v) {
            Case::C1 => self.apply_c1(v, rng),
            Case::C2 => self.apply_c2(v, rng),
            Case::C3 => self.apply_c3(v, rng),
            Case::C4 => self.apply_c4(v),
            Case::C5 => self.apply_c5(v, rng),
            Case::C6 => self.apply_c6(v),
            Case::Fallback => self.append_single(v),
        }
    }

    fn wrong(v: VertexId, case: Case) -> ProcessError {
        ProcessError::WrongCase { v, case }
    }

    /// C1: a clear vertex becomes a 1-stub.
    pub fn apply_c1<D: Draw + ?Sized>(
        &mut self,
        v: VertexId,
        rng: &mut D,
    ) -> Result<EventRecord, ProcessError> {
        if self.roles[v as usize] != Role::Clear {
            return Err(Self::wrong(v, Case::C1));
        }
        if self.nonpath.len() == 0 {
            return Ok(EventRecord::new(self.t, v, Case::C4));
        }
        let before = self.counters();
        let mut rec = EventRecord::new(self.t, v, Case::C1);
        let edge = self.grow_stub(v, rng);
        rec.stubend = Some(edge.end);
        rec.created = Some(edge);

        let mut dirty = Vec::new();
        self.path.window(v, 2, &mut dirty);
        self.relabel(&dirty);
        rec.delta = before.delta_to(&self.counters());
        Ok(rec)
    }

    /// C2: a stub below the cap gains a stubedge.
    pub fn apply_c2<D: Draw + ?Sized>(
        &mut self,
        v: VertexId,
        rng: &mut D,
    ) -> Result<EventRecord, ProcessError> {
        let d = self.stubs.degree(v);
        if self.roles[v as usize] != Role::Stub || d >= self.config.cap as usize {
            return Err(Self::wrong(v, Case::C2));
        }
        let before = self.counters();
        let mut rec = EventRecord::new(self.t, v, Case::C2);
        if self.nonpath.len() == 0 {
            rec.case = Case::C4;
            return Ok(rec);
        }
        let edge = self.grow_stub(v, rng);
        rec.stubend = Some(edge.end);
        rec.created = Some(edge);
        rec.delta = before.delta_to(&self.counters());
        Ok(rec)
    }

    /// C3: a stub neighbor `v` of root `u` is presented. One of `u`'s
    /// stubedges is used to splice its stubend (and the partner, if paired)
    /// into the path between `u` and `v`.
    pub fn apply_c3<D: Draw + ?Sized>(
        &mut self,
        v: VertexId,
        rng: &mut D,
    ) -> Result<EventRecord, ProcessError> {
        let Role::StubNeighbor(u) = self.roles[v as usize] else {
            return Err(Self::wrong(v, Case::C3));
        };
        let before = self.counters();
        let mut rec = EventRecord::new(self.t, v, Case::C3);
        let degree = self.stubs.degree(u);
        debug_assert!(degree > 0);

        let pick = rng.index(degree);
        let used = self.stubs.edge_of_root(u, pick);
        let w = used.end;
        let partner = self.partner[w as usize];
        let mut inserted = vec![w];
        if partner != NIL {
            inserted.push(partner);
        }
        let class = if partner == NIL {
            HitClass::C3Isolated
        } else {
            HitClass::C3Paired
        };
        let hits: usize = inserted.iter().map(|&x| self.stubs.in_degree(x)).sum::<usize>() - 1;
        rec.stub_hits = Some(StubHits {
            class,
            nonpath: self.nonpath.len(),
            trials: self.stubs.len() - 1,
            hits,
        });

        let mut emptied = Vec::new();
        self.stubs.remove_root_edge(u, pick);
        self.note_edge_removed(u, &mut emptied);
        self.drop_edges_into(&inserted, &mut rec.deleted, &mut emptied);

        for &x in &inserted {
            self.leave_nonpath(x);
        }
        self.path.splice_between(u, v, &inserted);
        for &x in &inserted {
            self.assign_join_seq(x);
        }
        let last = *inserted.last().expect("nonempty");
        self.graph_edges.push((v, last));

        let mut dirty = Vec::new();
        for &x in [u, v].iter().chain(&inserted).chain(&emptied) {
            self.path.window(x, 2, &mut dirty);
        }
        self.relabel(&dirty);

        rec.root = Some(u);
        rec.stubend = Some(w);
        rec.partner = (partner != NIL).then_some(partner);
        rec.delta = before.delta_to(&self.counters());
        Ok(rec)
    }

    /// C4: blocked vertex or stub at the cap; nothing happens.
    pub fn apply_c4(&mut self, v: VertexId) -> Result<EventRecord, ProcessError> {
        if self.classify(v) != Case::C4 {
            return Err(Self::wrong(v, Case::C4));
        }
        Ok(EventRecord::new(self.t, v, Case::C4))
    }

    /// C5: an isolated vertex pairs with another uniformly chosen isolated
    /// vertex. Falls back to appending when pairing is impossible.
    pub fn apply_c5<D: Draw + ?Sized>(
        &mut self,
        v: VertexId,
        rng: &mut D,
    ) -> Result<EventRecord, ProcessError> {
        if self.status(v) != VertexStatus::Isolated {
            return Err(Self::wrong(v, Case::C5));
        }
        if !self.config.pairing_enabled || self.isolated.len() < 2 {
            return self.append_single(v);
        }
        let before = self.counters();
        let mut rec = EventRecord::new(self.t, v, Case::C5);
        self.isolated.remove(v);
        let other = self.isolated.get(rng.index(self.isolated.len()));
        self.isolated.remove(other);
        self.partner[v as usize] = other;
        self.partner[other as usize] = v;
        self.graph_edges.push((v, other));
        rec.partner = Some(other);
        rec.delta = before.delta_to(&self.counters());
        Ok(rec)
    }

    /// C6: a paired vertex is presented; `v` then its partner join the tail.
    pub fn apply_c6(&mut self, v: VertexId) -> Result<EventRecord, ProcessError> {
        let VertexStatus::Paired(other) = self.status(v) else {
            return Err(Self::wrong(v, Case::C6));
        };
        let before = self.counters();
        let mut rec = EventRecord::new(self.t, v, Case::C6);
        rec.stub_hits = Some(StubHits {
            class: HitClass::C6,
            nonpath: self.nonpath.len(),
            trials: self.stubs.len(),
            hits: self.stubs.in_degree(v) + self.stubs.in_degree(other),
        });

        let mut emptied = Vec::new();
        self.drop_edges_into(&[v, other], &mut rec.deleted, &mut emptied);
        if let Some(tail) = self.path.tail() {
            self.graph_edges.push((tail, v));
        }
        for x in [v, other] {
            self.leave_nonpath(x);
            self.path.push_back(x);
            self.assign_join_seq(x);
        }

        let mut dirty = Vec::new();
        for &x in [v, other].iter().chain(&emptied) {
            self.path.window(x, 2, &mut dirty);
        }
        self.relabel(&dirty);
        rec.partner = Some(other);
        rec.delta = before.delta_to(&self.counters());
        Ok(rec)
    }

    /// Appends a lone isolated vertex to the tail (recorded as `Fallback`).
    pub fn append_single(&mut self, v: VertexId) -> Result<EventRecord, ProcessError> {
        if self.status(v) != VertexStatus::Isolated {
            return Err(Self::wrong(v, Case::Fallback));
        }
        let before = self.counters();
        let mut rec = EventRecord::new(self.t, v, Case::Fallback);
        let mut emptied = Vec::new();
        self.drop_edges_into(&[v], &mut rec.deleted, &mut emptied);
        if let Some(tail) = self.path.tail() {
            self.graph_edges.push((tail, v));
        }
        self.leave_nonpath(v);
        self.path.push_back(v);
        self.assign_join_seq(v);

        let mut dirty = Vec::new();
        for &x in std::iter::once(&v).chain(&emptied) {
            self.path.window(x, 2, &mut dirty);
        }
        self.relabel(&dirty);
        rec.delta = before.delta_to(&self.counters());
        Ok(rec)
    }

    /// Deletes every stubedge ending in `targets` and relabels around roots
    /// that lost their last edge. Returns the roots that lost at least one
    /// edge, in deletion order without repeats.
    pub fn delete_stubedges_into(&mut self, targets: &[VertexId]) -> Vec<VertexId> {
        let mut deleted = Vec::new();
        let mut emptied = Vec::new();
        self.drop_edges_into(targets, &mut deleted, &mut emptied);
        let mut dirty = Vec::new();
        for &r in &emptied {
            self.path.window(r, 2, &mut dirty);
        }
        self.relabel(&dirty);
        let mut roots: Vec<VertexId> = Vec::new();
        for e in deleted {
            if !roots.contains(&e.root) {
                roots.push(e.root);
            }
        }
        roots
    }

    /// Recomputes every role from scratch and resets the clear/artificial
    /// split to its canonical form.
    pub fn rebalance_labels(&mut self) {
        let all = self.path.to_vec();
        self.relabel(&all);
    }

    /// Plays rounds until the stop condition, sampling a row every
    /// `sample_every` rounds (plus the initial and final states).
    pub fn run_main_phase<D: Draw + ?Sized>(
        &mut self,
        rng: &mut D,
        sample_every: u64,
    ) -> Result<Vec<TrajectoryRow>, ProcessError> {
        self.run_observed(rng, sample_every, |_, _| {})
    }

    /// Like [`run_main_phase`](Self::run_main_phase), calling `observe`
    /// after every round.
    pub fn run_observed<D, F>(
        &mut self,
        rng: &mut D,
        sample_every: u64,
        mut observe: F,
    ) -> Result<Vec<TrajectoryRow>, ProcessError>
    where
        D: Draw + ?Sized,
        F: FnMut(&ProcessState, &EventRecord),
    {
        let every = sample_every.max(1);
        let mut rows = vec![self.trajectory_row()];
        while !self.is_finished() {
            let rec = self.step(rng)?;
            observe(self, &rec);
            if self.t.is_multiple_of(every) {
                rows.push(self.trajectory_row());
            }
        }
        if !self.t.is_multiple_of(every) {
            rows.push(self.trajectory_row());
        }
        Ok(rows)
    }

    /// Redraws the end of every live stubedge uniformly from the current
    /// non-path vertices, keeping roots, degrees and root edge order.
    ///
    /// Given the rest of the state, live stubends are independent and
    /// uniform, so this samples from the same conditional law. The graph
    /// edge log still records the original ends, so a state treated this
    /// way no longer certifies the cycle it eventually builds.
    pub fn resample_stubends<D: Draw + ?Sized>(&mut self, rng: &mut D) {
        let mut fresh = StubEdges::new(self.n());
        for root in 0..self.n() as VertexId {
            for _ in 0..self.stubs.degree(root) {
                let end = self.nonpath.get(rng.index(self.nonpath.len()));
                fresh.insert(StubEdge { root, end });
            }
        }
        self.stubs = fresh;
    }

    fn grow_stub<D: Draw + ?Sized>(&mut self, root: VertexId, rng: &mut D) -> StubEdge {
        let end = self.nonpath.get(rng.index(self.nonpath.len()));
        let d = self.stubs.degree(root);
        let edge = StubEdge { root, end };
        self.stubs.insert(edge);
        if d > 0 {
            self.s_count[d] -= 1;
        }
        self.s_count[d + 1] += 1;
        self.graph_edges.push((root, end));
        edge
    }

    fn note_edge_removed(&mut self, root: VertexId, emptied: &mut Vec<VertexId>) {
        let d = self.stubs.degree(root);
        self.s_count[d + 1] -= 1;
        if d > 0 {
            self.s_count[d] += 1;
        } else {
            emptied.push(root);
        }
    }

    fn drop_edges_into(
        &mut self,
        targets: &[VertexId],
        deleted: &mut Vec<StubEdge>,
        emptied: &mut Vec<VertexId>,
    ) {
        for &x in targets {
            while let Some(e) = self.stubs.pop_into(x) {
                self.note_edge_removed(e.root, emptied);
                deleted.push(e);
            }
        }
    }

    fn leave_nonpath(&mut self, x: VertexId) {
        self.nonpath.remove(x);
        if self.isolated.contains(x) {
            self.isolated.remove(x);
        }
        self.partner[x as usize] = NIL;
    }

    fn assign_join_seq(&mut self, x: VertexId) {
        self.join_seq[x as usize] = self.by_seq.len() as u32;
        self.by_seq.push(x);
    }

    fn is_stub(&self, v: Option<VertexId>) -> Option<VertexId> {
        v.filter(|&x| self.stubs.degree(x) > 0)
    }

    /// Role forced by nearby stubs, or `None` for a free vertex.
    pub(crate) fn structural_role(&self, x: VertexId) -> Option<Role> {
        if self.stubs.degree(x) > 0 {
            return Some(Role::Stub);
        }
        let prev = self.path.prev(x);
        let next = self.path.next(x);
        if let Some(r) = self.is_stub(prev).or(self.is_stub(next)) {
            return Some(Role::StubNeighbor(r));
        }
        let prev2 = prev.and_then(|y| self.path.prev(y));
        let next2 = next.and_then(|y| self.path.next(y));
        if self.is_stub(prev2).or(self.is_stub(next2)).is_some() {
            return Some(Role::BlockedStructural);
        }
        None
    }

    fn relabel(&mut self, dirty: &[VertexId]) {
        for &x in dirty {
            let key = self.join_seq[x as usize];
            let old = self.roles[x as usize];
            match (old.is_free(), self.structural_role(x)) {
                (true, None) => {}
                (true, Some(r)) => {
                    self.free.remove(key);
                    self.roles[x as usize] = r;
                }
                (false, None) => {
                    let clear = self.free.insert(key);
                    self.roles[x as usize] = if clear {
                        Role::Clear
                    } else {
                        Role::BlockedArtificial
                    };
                }
                (false, Some(r)) => self.roles[x as usize] = r,
            }
        }
        let target = self.clear_target();
        let roles = &mut self.roles;
        let by_seq = &self.by_seq;
        self.free.rebalance(target, |key, clear| {
            roles[by_seq[key as usize] as usize] = if clear {
                Role::Clear
            } else {
                Role::BlockedArtificial
            };
        });
    }

    /// Adds a stubedge with no precondition checks; only the degree census
    /// is kept consistent.
    #[cfg(test)]
    pub(crate) fn inject_stubedge_unchecked(&mut self, root: VertexId, end: VertexId) {
        let d = self.stubs.degree(root);
        self.stubs.insert(StubEdge { root, end });
        if d > 0 {
            self.s_count[d] -= 1;
        }
        self.s_count[d + 1] += 1;
    }

    /// Appends isolated vertices to the tail without playing rounds.
    #[cfg(test)]
    pub(crate) fn seed_path(&mut self, order: &[VertexId]) {
        for &v in order {
            assert_eq!(self.status(v), VertexStatus::Isolated);
            self.leave_nonpath(v);
            self.path.push_back(v);
            self.assign_join_seq(v);
            let mut dirty = Vec::new();
            self.path.window(v, 2, &mut dirty);
            self.relabel(&dirty);
        }
    }

    #[cfg(test)]
    pub(crate) fn seed_pair(&mut self, a: VertexId, b: VertexId) {
        self.isolated.remove(a);
        self.isolated.remove(b);
        self.partner[a as usize] = b;
        self.partner[b as usize] = a;
    }

    #[cfg(test)]
    pub(crate) fn path_mut(&mut self) -> &mut PathLinks {
        &mut self.path
    }
}

#[cfg(test)]
mod tests;
