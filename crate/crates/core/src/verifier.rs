//! Independent checks: state audits, the exact one-round expectation by
//! enumeration, the closed-form expected drifts, stubend hit statistics,
//! and Hamilton cycle validation.

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use crate::process::{
    Case, Counters, HitClass, ProcessState, Role, Scripted, StubHits, VertexId, VertexStatus,
};

/// Fewest events a stubend hit statistic will pool.
pub const MIN_HIT_EVENTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("exact enumeration needs at least 2 non-path vertices, found {0}")]
    TooFewNonPath(usize),
    #[error("need at least {needed} {class:?} events, found {found}")]
    InsufficientEvents {
        class: HitClass,
        needed: usize,
        found: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub invariant: &'static str,
    pub t: u64,
    pub detail: String,
}

impl Violation {
    pub fn json_line(&self) -> String {
        serde_json::to_string(self).expect("plain struct serializes")
    }
}

/// Audits every structural invariant of `state`; empty iff all hold.
pub fn check_invariants(state: &ProcessState) -> Vec<Violation> {
    let t = state.t();
    let mut out = Vec::new();
    let mut fail = |invariant: &'static str, detail: String| {
        out.push(Violation {
            invariant,
            t,
            detail,
        })
    };
    let n = state.n();
    let c = state.counters();
    let path = state.path();
    let cap = state.config().cap as usize;

    // path links
    let mut pos = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(c.p);
    let mut cursor = path.head();
    let mut prev = None;
    while let Some(v) = cursor {
        if order.len() > n || pos[v as usize] != usize::MAX {
            fail("path_links", format!("walk from head revisits {v}"));
            break;
        }
        if !path.contains(v) {
            fail("path_links", format!("{v} linked but not marked on path"));
        }
        if path.prev(v) != prev {
            fail("path_links", format!("prev({v}) is not the inverse of next"));
        }
        pos[v as usize] = order.len();
        order.push(v);
        prev = Some(v);
        cursor = path.next(v);
    }
    if prev != path.tail() {
        fail("path_links", format!("walk ends at {prev:?}, tail is {:?}", path.tail()));
    }
    let marked = (0..n as VertexId).filter(|&v| path.contains(v)).count();
    if order.len() != c.p || marked != c.p {
        fail(
            "path_links",
            format!("P = {}, walk length {}, marked {marked}", c.p, order.len()),
        );
    }

    // conservation and pairing
    if c.p + c.v1 + c.v2 != n {
        fail("conservation", format!("P + V1 + V2 = {} != {n}", c.p + c.v1 + c.v2));
    }
    let (mut isolated, mut paired) = (0, 0);
    for v in 0..n as VertexId {
        match state.status(v) {
            VertexStatus::OnPath => {}
            VertexStatus::Isolated => isolated += 1,
            VertexStatus::Paired(w) => {
                paired += 1;
                if w == v || state.status(w) != VertexStatus::Paired(v) {
                    fail("pairing", format!("{v} paired with {w}, not an involution"));
                }
            }
        }
    }
    if isolated != c.v1 || paired != c.v2 || !c.v2.is_multiple_of(2) {
        fail(
            "conservation",
            format!(
                "census V1={isolated} V2={paired} vs counters V1={} V2={}",
                c.v1, c.v2
            ),
        );
    }

    // stubedges
    let edges = state.stub_edges();
    for problem in edges.index_mismatches() {
        fail("stub_index", problem);
    }
    for e in edges.iter() {
        if path.contains(e.end) {
            fail("stubend on path", format!("stubedge {}->{}", e.root, e.end));
        }
        if !path.contains(e.root) {
            fail("stubroot off path", format!("stubedge {}->{}", e.root, e.end));
        }
    }
    let mut by_degree = [0usize; 4];
    for v in 0..n as VertexId {
        let d = edges.degree(v);
        if d > cap {
            fail("stub_census", format!("{v} has degree {d} above cap {cap}"));
        } else {
            by_degree[d] += 1;
        }
    }
    if by_degree[1..] != [c.s1, c.s2, c.s3] {
        fail(
            "stub_census",
            format!(
                "degree census {:?} vs counters ({}, {}, {})",
                &by_degree[1..],
                c.s1,
                c.s2,
                c.s3
            ),
        );
    }

    // stub separation and roles, recomputed from positions
    let stub_at = |i: isize| -> Option<VertexId> {
        if i < 0 || i as usize >= order.len() {
            return None;
        }
        let v = order[i as usize];
        (edges.degree(v) > 0).then_some(v)
    };
    let stub_positions: Vec<usize> = (0..order.len())
        .filter(|&i| stub_at(i as isize).is_some())
        .collect();
    for w in stub_positions.windows(2) {
        if w[1] - w[0] < 3 {
            fail(
                "stub_separation",
                format!("stubs {} and {} at path distance {}", order[w[0]], order[w[1]], w[1] - w[0]),
            );
        }
    }
    let mut clear = 0;
    let mut free = 0;
    for (i, &v) in order.iter().enumerate() {
        let i = i as isize;
        let expected = if stub_at(i).is_some() {
            Some(Role::Stub)
        } else if let Some(r) = stub_at(i - 1).or(stub_at(i + 1)) {
            Some(Role::StubNeighbor(r))
        } else if stub_at(i - 2).or(stub_at(i + 2)).is_some() {
            Some(Role::BlockedStructural)
        } else {
            None
        };
        let actual = state.role(v);
        match expected {
            Some(r) if r != actual => {
                fail("role", format!("{v} labeled {actual:?}, expected {r:?}"));
            }
            Some(_) => {}
            None => {
                free += 1;
                if !actual.is_free() || state.free_label_of(v) != Some(actual) {
                    fail("role", format!("free vertex {v} labeled {actual:?}"));
                }
                if actual == Role::Clear {
                    clear += 1;
                }
            }
        }
    }
    for v in 0..n as VertexId {
        if !path.contains(v) && state.role(v) != Role::OffPath {
            fail("role", format!("off-path vertex {v} labeled {:?}", state.role(v)));
        }
    }
    let target = c.p.saturating_sub(5 * c.stubs());
    if clear != target || state.clear_count() != clear {
        fail(
            "clear_count",
            format!("{clear} clear vertices (tracked {}), P - 5S target {target}", state.clear_count()),
        );
    }
    if free != state.clear_count() + state.artificial_count() {
        fail("clear_count", format!("{free} free vertices, tracked {}", state.clear_count() + state.artificial_count()));
    }
    if !state.free_labels_ordered() {
        fail("artificial_order", "an artificial block predates a clear vertex".into());
    }
    out
}

/// Expected one-round change of `(P, V1, V2, S1, S2, S3)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ExpectationVector {
    pub d_p: f64,
    pub d_v1: f64,
    pub d_v2: f64,
    pub d_s1: f64,
    pub d_s2: f64,
    pub d_s3: f64,
}

impl ExpectationVector {
    pub fn as_array(&self) -> [f64; 6] {
        [self.d_p, self.d_v1, self.d_v2, self.d_s1, self.d_s2, self.d_s3]
    }

    pub fn from_array(x: [f64; 6]) -> Self {
        Self {
            d_p: x[0],
            d_v1: x[1],
            d_v2: x[2],
            d_s1: x[3],
            d_s2: x[4],
            d_s3: x[5],
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Exact rational expectation: coordinate `i` equals `num[i] / denom`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExactExpectation {
    pub num: [i128; 6],
    pub denom: i128,
}

impl ExactExpectation {
    pub fn to_vector(&self) -> ExpectationVector {
        ExpectationVector::from_array(self.num.map(|x| x as f64 / self.denom as f64))
    }

    /// Numerator of `dP + dV1 + dV2`; zero when vertices are conserved.
    pub fn mass_numerator(&self) -> i128 {
        self.num[0] + self.num[1] + self.num[2]
    }
}

// lcm of the possible stub degrees 1..=3
const DEGREE_LCM: i128 = 6;

/// Exact expectation of the next round's counter deltas, by running the
/// real transition on a copy of `state` for every presented vertex and
/// every stubedge choice in C3.
///
/// Which stubend a new stubedge gets, and which partner C5 picks, does not
/// move the counters, so those draws are fixed to the first option.
pub fn expected_step_exact(state: &ProcessState) -> Result<ExactExpectation, VerifyError> {
    let c = state.counters();
    if c.nonpath() < 2 {
        return Err(VerifyError::TooFewNonPath(c.nonpath()));
    }
    let n = state.n();
    let mut num = [0i128; 6];
    let mut accumulate = |copy_of: &ProcessState, v: VertexId, pick: usize, weight: i128| {
        let mut copy = copy_of.clone();
        let rec = copy
            .present(v, &mut Scripted::new(vec![pick]))
            .expect("classified case applies");
        for (acc, d) in num.iter_mut().zip(rec.delta.as_array()) {
            *acc += weight * d as i128;
        }
    };
    for v in 0..n as VertexId {
        match state.classify(v) {
            Case::C4 => {}
            Case::C3 => {
                let Role::StubNeighbor(root) = state.role(v) else {
                    unreachable!("C3 is classified from the stub neighbor role")
                };
                let d = state.stub_degree(root);
                for pick in 0..d {
                    accumulate(state, v, pick, DEGREE_LCM / d as i128);
                }
            }
            _ => accumulate(state, v, 0, DEGREE_LCM),
        }
    }
    Ok(ExactExpectation {
        num,
        denom: DEGREE_LCM * n as i128,
    })
}

/// Exact expectation of the next round's counter deltas given only the
/// state's skeleton: path, roles, pairs and stub degrees. Live stubends
/// are treated as unrevealed, each independently uniform over the
/// non-path vertices.
///
/// The deletion cascade is enumerated per root: a root with `m` edges at
/// risk loses `k` of them with probability `C(m,k) q^k (1-q)^(m-k)`,
/// where `q = |targets| / V`.
pub fn expected_step_deferred(state: &ProcessState) -> Result<ExactExpectation, VerifyError> {
    let c = state.counters();
    let v_all = c.nonpath() as i128;
    if v_all < 2 {
        return Err(VerifyError::TooFewNonPath(c.nonpath()));
    }
    let n = state.n();
    let cap = state.config().cap as usize;
    let edges = state.stub_edges();
    let roots: Vec<usize> = (0..n as VertexId)
        .map(|v| edges.degree(v))
        .filter(|&d| d > 0)
        .collect();
    // every root at risk, for one and two targets
    let mut cascade_all = [[0i128; 4]; 3];
    for targets in 1..=2 {
        for &d in &roots {
            add4(&mut cascade_all[targets], &cascade(d, targets as i128, v_all));
        }
    }

    // numerator over DEGREE_LCM * n * V^4
    let scale = DEGREE_LCM * v_all.pow(4);
    let mut num = [0i128; 6];
    let add_base = |num: &mut [i128; 6], weight: i128, base: [i128; 6]| {
        for i in 0..6 {
            num[i] += weight * base[i];
        }
    };
    let add_cascade = |num: &mut [i128; 6], weight: i128, by_degree: &[i128; 4]| {
        for d in 1..=3 {
            num[2 + d] += weight * by_degree[d];
        }
    };
    let degree_move = |from: usize, to: usize| -> [i128; 6] {
        let mut x = [0i128; 6];
        if from > 0 {
            x[2 + from] -= 1;
        }
        if to > 0 {
            x[2 + to] += 1;
        }
        x
    };

    for v in 0..n as VertexId {
        match state.classify(v) {
            Case::C4 => {}
            Case::C1 => add_base(&mut num, scale, degree_move(0, 1)),
            Case::C2 => {
                let d = state.stub_degree(v);
                add_base(&mut num, scale, degree_move(d, d + 1));
            }
            Case::C5 => add_base(&mut num, scale, [0, -2, 2, 0, 0, 0]),
            Case::C6 => {
                add_base(&mut num, scale, [2, 0, -2, 0, 0, 0]);
                add_cascade(&mut num, DEGREE_LCM * v_all, &cascade_all[2]);
            }
            Case::Fallback => {
                add_base(&mut num, scale, [1, -1, 0, 0, 0, 0]);
                add_cascade(&mut num, DEGREE_LCM * v_all, &cascade_all[1]);
            }
            Case::C3 => {
                let Role::StubNeighbor(root) = state.role(v) else {
                    unreachable!("C3 is classified from the stub neighbor role")
                };
                let d = state.stub_degree(root);
                // every edge choice gives the same distribution; fold the
                // 1/d edge choice into the degree-uniform weight
                for (count, targets, base) in [
                    (c.v1 as i128, 1i128, [1i128, -1, 0, 0, 0, 0]),
                    (c.v2 as i128, 2, [2, 0, -2, 0, 0, 0]),
                ] {
                    if count == 0 {
                        continue;
                    }
                    // weight count / (n V) per presented vertex
                    add_base(&mut num, DEGREE_LCM * v_all.pow(3) * count, base);
                    add_base(
                        &mut num,
                        DEGREE_LCM * v_all.pow(3) * count,
                        degree_move(d, d - 1),
                    );
                    let mut others = cascade_all[targets as usize];
                    sub4(&mut others, &cascade(d, targets, v_all));
                    if d > 1 {
                        add4(&mut others, &cascade(d - 1, targets, v_all));
                    }
                    add_cascade(&mut num, DEGREE_LCM * count, &others);
                }
            }
        }
    }
    debug_assert!(cap >= 2);
    Ok(ExactExpectation {
        num,
        denom: scale * n as i128,
    })
}

fn add4(acc: &mut [i128; 4], x: &[i128; 4]) {
    for i in 0..4 {
        acc[i] += x[i];
    }
}

fn sub4(acc: &mut [i128; 4], x: &[i128; 4]) {
    for i in 0..4 {
        acc[i] -= x[i];
    }
}

/// Expected degree-census change, times `V^3`, of one root with `d` edges
/// each hitting the targets with probability `targets / V`.
fn cascade(d: usize, targets: i128, v: i128) -> [i128; 4] {
    debug_assert!((1..=3).contains(&d));
    let mut out = [0i128; 4];
    let binom = |m: usize, k: usize| -> i128 {
        match (m, k) {
            (_, 0) => 1,
            (m, k) if k == m => 1,
            (3, _) => 3,
            (2, 1) => 2,
            _ => unreachable!(),
        }
    };
    for k in 1..=d {
        let weight = binom(d, k)
            * targets.pow(k as u32)
            * (v - targets).pow((d - k) as u32)
            * v.pow(3 - d as u32);
        out[d] -= weight;
        if d > k {
            out[d - k] += weight;
        }
    }
    out
}

/// Closed-form expected one-round drift of the counters, error terms
/// dropped, for raw (unnormalized) counts.
///
/// With `cap = 2` the transition from 2-stub to 3-stub is absent and the
/// 3-stub flows vanish.
pub fn drift_formulas(n: f64, counts: [f64; 6], cap: u8) -> ExpectationVector {
    let [p, v1, v2, s1, s2, s3] = counts;
    let s = s1 + s2 + s3;
    let v = v1 + v2;
    let neighbor = 2.0 * s / n;
    // probability-weighted rate at which a given stubedge gets deleted
    let deletion = neighbor * (v1 + 2.0 * v2) / (v * v) + (v2 / n) * (2.0 / v);

    let d_p = 2.0 * v2 / n + neighbor * (v1 + 2.0 * v2) / v;
    let d_v1 = -2.0 * v1 / n - neighbor * v1 / v;
    let d_v2 = -2.0 * v2 / n + 2.0 * v1 / n - neighbor * 2.0 * v2 / v;
    let d_s1 = (p - 5.0 * s) / n - s1 / n - 2.0 * s1 / n + 2.0 * s2 / n + deletion * (2.0 * s2 - s1);
    let (d_s2, d_s3) = if cap >= 3 {
        (
            s1 / n - s2 / n - 2.0 * s2 / n + 2.0 * s3 / n + deletion * (3.0 * s3 - 2.0 * s2),
            s2 / n - 2.0 * s3 / n - deletion * 3.0 * s3,
        )
    } else {
        (s1 / n - 2.0 * s2 / n - deletion * 2.0 * s2, 0.0)
    };
    ExpectationVector {
        d_p,
        d_v1,
        d_v2,
        d_s1,
        d_s2,
        d_s3,
    }
}

/// [`drift_formulas`] evaluated at the state's counters.
pub fn expectation_formulas(state: &ProcessState) -> ExpectationVector {
    let c: Counters = state.counters();
    drift_formulas(
        state.n() as f64,
        c.as_array().map(|x| x as f64),
        state.config().cap,
    )
}

/// True iff `order` lists each of `0..n` once and every cyclically
/// consecutive pair is in `edges` (undirected).
pub fn verify_hamilton_cycle(order: &[VertexId], edges: &[(VertexId, VertexId)], n: usize) -> bool {
    if order.len() != n || n < 3 {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in order {
        if v as usize >= n || seen[v as usize] {
            return false;
        }
        seen[v as usize] = true;
    }
    let key = |a: VertexId, b: VertexId| (a.min(b), a.max(b));
    let set: HashSet<(VertexId, VertexId)> = edges.iter().map(|&(a, b)| key(a, b)).collect();
    (0..n).all(|i| set.contains(&key(order[i], order[(i + 1) % n])))
}

/// Pooled stubend hit rate for one event class against its uniform
/// target (`targets / V` per surviving stubedge).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HitStatistic {
    pub class: HitClass,
    pub events: usize,
    pub trials: u64,
    pub hits: u64,
    pub empirical_rate: f64,
    pub expected_rate: f64,
    pub z: f64,
}

pub fn hit_statistic<'a, I>(log: I, class: HitClass) -> Result<HitStatistic, VerifyError>
where
    I: IntoIterator<Item = &'a StubHits>,
{
    hit_statistic_with_min(log, class, MIN_HIT_EVENTS)
}

pub fn hit_statistic_with_min<'a, I>(
    log: I,
    class: HitClass,
    min_events: usize,
) -> Result<HitStatistic, VerifyError>
where
    I: IntoIterator<Item = &'a StubHits>,
{
    let (mut events, mut trials, mut hits) = (0usize, 0u64, 0u64);
    let (mut mean, mut var) = (0.0f64, 0.0f64);
    for h in log.into_iter().filter(|h| h.class == class) {
        events += 1;
        trials += h.trials as u64;
        hits += h.hits as u64;
        let q = (class.targets() as f64 / h.nonpath as f64).min(1.0);
        mean += h.trials as f64 * q;
        var += h.trials as f64 * q * (1.0 - q);
    }
    if events < min_events {
        return Err(VerifyError::InsufficientEvents {
            class,
            needed: min_events,
            found: events,
        });
    }
    let z = if var > 0.0 {
        (hits as f64 - mean) / var.sqrt()
    } else {
        0.0
    };
    let per_trial = |x: f64| if trials > 0 { x / trials as f64 } else { 0.0 };
    Ok(HitStatistic {
        class,
        events,
        trials,
        hits,
        empirical_rate: per_trial(hits as f64),
        expected_rate: per_trial(mean),
        z,
    })
}
