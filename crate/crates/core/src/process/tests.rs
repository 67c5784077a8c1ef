use super::*;
use crate::verifier::check_invariants;

fn fresh(n: usize) -> ProcessState {
    ProcessState::new(Config::new(n, 0)).unwrap()
}

fn with_path(n: usize, order: &[VertexId]) -> ProcessState {
    let mut s = fresh(n);
    s.seed_path(order);
    s
}

fn range(a: VertexId, b: VertexId) -> Vec<VertexId> {
    (a..b).collect()
}

fn audit(s: &ProcessState) {
    let v = check_invariants(s);
    assert!(v.is_empty(), "{v:?}");
}

/// Applies C1 or C2 at `v` with the pick that sends the new edge to `end`.
fn grow_to(s: &ProcessState, v: VertexId, end: VertexId) -> (ProcessState, EventRecord) {
    for i in 0..s.counters().nonpath() {
        let mut c = s.clone();
        let mut d = Scripted::new(vec![i]);
        let rec = match c.classify(v) {
            Case::C1 => c.apply_c1(v, &mut d),
            Case::C2 => c.apply_c2(v, &mut d),
            other => panic!("{v} classifies as {other:?}"),
        }
        .unwrap();
        if rec.stubend == Some(end) {
            audit(&c);
            return (c, rec);
        }
    }
    panic!("{end} is not a non-path vertex");
}

fn roles(s: &ProcessState, vs: &[VertexId]) -> Vec<Role> {
    vs.iter().map(|&v| s.role(v)).collect()
}

use Role::{BlockedArtificial as A, BlockedStructural as B, Clear as C, Stub as S};

#[test]
fn new_state_is_empty_graph() {
    let s = fresh(4);
    assert_eq!(s.counters().as_array(), [0, 4, 0, 0, 0, 0]);
    assert_eq!(s.t(), 0);
    let s = ProcessState::new(Config::new(100_000, 7)).unwrap();
    assert_eq!(s.counters().as_array(), [0, 100_000, 0, 0, 0, 0]);
    audit(&s);
}

#[test]
fn degenerate_configs_rejected() {
    assert_eq!(
        ProcessState::new(Config::new(1, 0)).unwrap_err(),
        ProcessError::TooSmallForCycle(1)
    );
    let one = Config::new(1, 0).with_stop_mode(StopMode::MainPhase { epsilon: 0.5 });
    assert_eq!(ProcessState::new(one).unwrap().counters().v1, 1);
    assert_eq!(
        ProcessState::new(Config::new(0, 0)).unwrap_err(),
        ProcessError::EmptyVertexSet
    );
    assert_eq!(
        ProcessState::new(Config::new(5, 0).with_cap(4)).unwrap_err(),
        ProcessError::BadCap(4)
    );
    let bad = Config::new(5, 0).with_stop_mode(StopMode::MainPhase { epsilon: 1.0 });
    assert!(matches!(ProcessState::new(bad), Err(ProcessError::BadEpsilon(_))));
}

#[test]
fn classify_each_kind() {
    let mut s = fresh(12);
    s.seed_path(&range(0, 8));
    s.seed_pair(8, 9);
    assert_eq!(s.classify(10), Case::C5);
    assert_eq!(s.classify(8), Case::C6);
    assert_eq!(s.classify(3), Case::C1);
    let (s, _) = grow_to(&s, 3, 10);
    assert_eq!(s.classify(3), Case::C2);
    assert_eq!(s.classify(2), Case::C3);
    assert_eq!(s.classify(1), Case::C4);
    assert_eq!(with_path(4, &[0, 1, 2]).classify(3), Case::Fallback);
    let s = ProcessState::new(Config::new(12, 0).with_pairing(false)).unwrap();
    assert_eq!(s.classify(0), Case::Fallback);
}

#[test]
fn stub_at_cap_is_inert() {
    let s = with_path(12, &range(0, 6));
    let (s, _) = grow_to(&s, 2, 6);
    let (s, _) = grow_to(&s, 2, 7);
    let (mut s, rec) = grow_to(&s, 2, 8);
    assert_eq!(rec.delta.as_array(), [0, 0, 0, 0, -1, 1]);
    assert_eq!(s.stub_degree(2), 3);
    assert_eq!(s.classify(2), Case::C4);
    let before = s.clone();
    let rec = s.apply_c4(2).unwrap();
    assert!(rec.delta.is_zero());
    assert_eq!(s.counters(), before.counters());

    let mut s2 = ProcessState::new(Config::new(12, 0).with_cap(2)).unwrap();
    s2.seed_path(&range(0, 6));
    let (s2, _) = grow_to(&s2, 2, 6);
    let (mut s2, rec) = grow_to(&s2, 2, 7);
    assert_eq!(rec.delta.as_array(), [0, 0, 0, -1, 1, 0]);
    assert_eq!(s2.classify(2), Case::C4);
    assert!(s2.apply_c4(2).unwrap().delta.is_zero());
    assert!(matches!(s2.apply_c2(2, &mut Scripted::default()), Err(ProcessError::WrongCase { .. })));
}

#[test]
fn c1_interior_gives_bnsnb() {
    let s = with_path(20, &range(0, 10));
    assert_eq!(s.clear_count(), 10);
    let (s, rec) = grow_to(&s, 4, 15);
    assert_eq!(rec.case, Case::C1);
    assert_eq!(rec.delta.as_array(), [0, 0, 0, 1, 0, 0]);
    assert_eq!(
        roles(&s, &range(2, 7)),
        vec![B, Role::StubNeighbor(4), S, Role::StubNeighbor(4), B]
    );
    assert_eq!(s.clear_count(), 5);
    assert_eq!(s.artificial_count(), 0);
    assert_eq!(s.stub_edges().edges_into(15).count(), 1);
}

#[test]
fn c1_at_distance_three_gives_snns() {
    let s = with_path(20, &range(0, 12));
    let (s, _) = grow_to(&s, 2, 15);
    assert_eq!(s.role(5), C);
    let (s, _) = grow_to(&s, 5, 16);
    assert_eq!(
        roles(&s, &range(2, 6)),
        vec![S, Role::StubNeighbor(2), Role::StubNeighbor(5), S]
    );
    assert_eq!(roles(&s, &[6, 7]), vec![Role::StubNeighbor(5), B]);
    // 12 - 5 * 2 = 2 clear among the 4 free vertices; the newest are blocked
    assert_eq!(roles(&s, &range(8, 12)), vec![C, C, A, A]);
}

#[test]
fn c1_at_distance_four_gives_snbns() {
    let s = with_path(20, &range(0, 14));
    let (s, _) = grow_to(&s, 2, 15);
    let (s, _) = grow_to(&s, 6, 16);
    assert_eq!(
        roles(&s, &range(2, 7)),
        vec![S, Role::StubNeighbor(2), B, Role::StubNeighbor(6), S]
    );
    assert_eq!(s.clear_count(), 4);
    assert_eq!(s.role(13), A);
}

#[test]
fn c1_at_head_blocks_two_artificially() {
    let s = with_path(20, &range(0, 10));
    let (s, _) = grow_to(&s, 0, 12);
    assert_eq!(roles(&s, &[0, 1, 2]), vec![S, Role::StubNeighbor(0), B]);
    assert_eq!(s.clear_count(), 5);
    assert_eq!(s.artificial_count(), 2);
    assert_eq!(roles(&s, &[8, 9]), vec![A, A]);
}

#[test]
fn c1_with_no_nonpath_is_noop() {
    let mut s = with_path(5, &range(0, 5));
    let before = s.counters();
    let rec = s.apply_c1(2, &mut Scripted::default()).unwrap();
    assert_eq!(rec.case, Case::C4);
    assert_eq!(s.counters(), before);
}

#[test]
fn wrong_case_rejected() {
    let mut s = with_path(8, &range(0, 4));
    let mut d = Scripted::default();
    assert!(s.apply_c3(1, &mut d).is_err());
    assert!(s.apply_c6(6).is_err());
    assert!(s.apply_c5(1, &mut d).is_err());
    assert!(s.apply_c4(1).is_err());
    assert!(s.append_single(1).is_err());
    assert_eq!(s.present(99, &mut d).unwrap_err(), ProcessError::VertexOutOfRange(99));
}

#[test]
fn c3_inserts_isolated_stubend() {
    let s = with_path(10, &[0, 1, 2, 3]);
    let (mut s, _) = grow_to(&s, 1, 7);
    assert_eq!(s.role(2), Role::StubNeighbor(1));
    let rec = s.apply_c3(2, &mut Scripted::new(vec![0])).unwrap();
    audit(&s);
    assert_eq!(s.path().to_vec(), vec![0, 1, 7, 2, 3]);
    assert_eq!(rec.delta.as_array(), [1, -1, 0, -1, 0, 0]);
    assert_eq!((rec.root, rec.stubend, rec.partner), (Some(1), Some(7), None));
    assert_eq!(roles(&s, &[0, 1, 7, 2, 3]), vec![C; 5]);
    let h = rec.stub_hits.unwrap();
    assert_eq!((h.class, h.trials, h.hits, h.nonpath), (HitClass::C3Isolated, 0, 0, 6));
}

#[test]
fn c3_inserts_pair_in_order() {
    let mut s = fresh(10);
    s.seed_path(&[0, 1, 2, 3]);
    s.seed_pair(5, 6);
    let (mut s, _) = grow_to(&s, 1, 5);
    let rec = s.apply_c3(2, &mut Scripted::new(vec![0])).unwrap();
    audit(&s);
    assert_eq!(s.path().to_vec(), vec![0, 1, 5, 6, 2, 3]);
    assert_eq!(rec.delta.as_array(), [2, 0, -2, -1, 0, 0]);
    assert_eq!(rec.partner, Some(6));
    assert!(s.graph_edges().contains(&(2, 6)));
}

#[test]
fn c3_cascade_removes_other_root() {
    let s = with_path(20, &range(0, 12));
    let (s, _) = grow_to(&s, 1, 15);
    assert_eq!(s.role(7), C);
    let (s, _) = grow_to(&s, 7, 15);
    let (mut s, _) = grow_to(&s, 1, 16);
    let rec = s.apply_c3(2, &mut Scripted::new(vec![0])).unwrap();
    audit(&s);
    assert_eq!(rec.stubend, Some(15));
    assert_eq!(rec.deleted, vec![StubEdge { root: 7, end: 15 }]);
    assert_eq!(rec.delta.as_array(), [1, -1, 0, 0, -1, 0]);
    assert_eq!(rec.stub_hits.unwrap().hits, 1);
    assert_eq!(s.stub_degree(7), 0);
    assert_eq!(s.role(7), C);
    assert_eq!(s.stub_degree(1), 1);
}

#[test]
fn c3_uses_picked_edge() {
    let s = with_path(20, &range(0, 6));
    let (s, _) = grow_to(&s, 2, 10);
    let (s, _) = grow_to(&s, 2, 11);
    let (mut s, _) = grow_to(&s, 2, 12);
    let rec = s.apply_c3(3, &mut Scripted::new(vec![1])).unwrap();
    assert_eq!(rec.stubend, Some(11));
    assert_eq!(s.path().to_vec(), vec![0, 1, 2, 11, 3, 4, 5]);
    let ends: Vec<_> = s.stub_edges().edges_of_root(2).map(|e| e.end).collect();
    assert_eq!(ends, vec![10, 12]);
    audit(&s);
}

#[test]
fn c5_pairs_two_isolated() {
    let mut s = with_path(10, &[0, 1, 2, 4, 5, 6, 7, 8]);
    let before = s.counters();
    let rec = s.apply_c5(3, &mut Scripted::default()).unwrap();
    assert_eq!(rec.partner, Some(9));
    assert_eq!(s.status(3), VertexStatus::Paired(9));
    assert_eq!(s.status(9), VertexStatus::Paired(3));
    assert_eq!(s.counters().v1, 0);
    assert_eq!(s.counters().v2, before.v2 + 2);
    audit(&s);
}

#[test]
fn lone_isolated_falls_back() {
    let mut s = with_path(10, &[0, 1, 2, 4, 5, 6, 7, 8, 9]);
    let rec = s.apply_c5(3, &mut Scripted::default()).unwrap();
    assert_eq!(rec.case, Case::Fallback);
    assert_eq!(s.path().tail(), Some(3));
    assert_eq!(rec.delta.p, 1);
    assert!(s.is_hamilton_path());
}

#[test]
fn pairing_off_appends() {
    let mut s = ProcessState::new(Config::new(6, 0).with_pairing(false)).unwrap();
    let rec = s.present(4, &mut Scripted::default()).unwrap();
    assert_eq!(rec.case, Case::Fallback);
    assert_eq!(s.path().to_vec(), vec![4]);
}

#[test]
fn c6_on_empty_path() {
    let mut s = fresh(4);
    s.seed_pair(1, 2);
    let rec = s.apply_c6(1).unwrap();
    assert_eq!(rec.delta.as_array(), [2, 0, -2, 0, 0, 0]);
    assert_eq!((s.path().head(), s.path().tail()), (Some(1), Some(2)));
    audit(&s);
}

#[test]
fn c6_deletes_all_stubs_into_pair() {
    let mut s = fresh(22);
    s.seed_path(&range(0, 12));
    s.seed_pair(20, 21);
    let (s, _) = grow_to(&s, 1, 20);
    let (s, _) = grow_to(&s, 7, 20);
    let (mut s, _) = grow_to(&s, 7, 21);
    let rec = s.apply_c6(21).unwrap();
    audit(&s);
    assert_eq!(rec.deleted.len(), 3);
    assert_eq!(rec.delta.as_array(), [2, 0, -2, -1, -1, 0]);
    assert_eq!(&s.path().to_vec()[12..], &[21, 20]);
    let h = rec.stub_hits.unwrap();
    assert_eq!((h.class, h.trials, h.hits), (HitClass::C6, 3, 3));
    assert!(s.stub_edges().is_empty());
}

#[test]
fn c6_after_stub_tail_is_not_clear() {
    let mut s = fresh(14);
    s.seed_path(&range(0, 10));
    s.seed_pair(12, 13);
    let (mut s, _) = grow_to(&s, 9, 10);
    s.apply_c6(12).unwrap();
    audit(&s);
    assert_eq!(roles(&s, &[12, 13]), vec![Role::StubNeighbor(9), B]);
}

#[test]
fn delete_stubedges_into_cases() {
    let s = with_path(20, &range(0, 10));
    let (mut s, _) = grow_to(&s, 4, 12);
    assert!(s.delete_stubedges_into(&[13]).is_empty());
    let (mut s2, _) = grow_to(&s, 4, 13);
    assert_eq!(s2.delete_stubedges_into(&[12, 13]), vec![4]);
    assert_eq!(s2.counters().stubs(), 0);
    assert_eq!(s2.clear_count(), 10);
    audit(&s2);

    let (s3, _) = grow_to(&s, 4, 13);
    let (mut s3, _) = grow_to(&s3, 4, 14);
    s3.delete_stubedges_into(&[13]);
    assert_eq!((s3.counters().s2, s3.counters().s3), (1, 0));
    assert_eq!(s3.role(4), S);
    s.delete_stubedges_into(&[]);
    audit(&s);
}

#[test]
fn rebalance_targets() {
    let s = with_path(20, &range(0, 10));
    let (mut s, _) = grow_to(&s, 4, 15);
    s.rebalance_labels();
    assert_eq!((s.clear_count(), s.artificial_count()), (5, 0));

    let s = with_path(20, &range(0, 10));
    let (s, _) = grow_to(&s, 2, 15);
    let (mut s, _) = grow_to(&s, 6, 16);
    s.rebalance_labels();
    assert_eq!(s.clear_target(), 0);
    assert_eq!((s.clear_count(), s.artificial_count()), (0, 1));
    assert_eq!(s.role(9), A);

    let s = with_path(8, &[0, 1, 2, 3]);
    let (mut s, _) = grow_to(&s, 1, 6);
    s.rebalance_labels();
    assert_eq!(s.clear_target(), 0);
    assert_eq!(s.clear_count(), 0);
    audit(&s);
}

#[test]
fn deficit_is_repaid_by_new_vertices() {
    let s = with_path(20, &[0, 1, 2, 3]);
    let (mut s, _) = grow_to(&s, 1, 10);
    assert_eq!(s.clear_count(), 0);
    s.append_single(4).unwrap();
    assert_eq!((s.clear_count(), s.role(4)), (0, A));
    for (v, clear) in [(5, 1), (6, 2), (7, 3)] {
        s.append_single(v).unwrap();
        assert_eq!(s.clear_count(), clear, "after {v}");
    }
    audit(&s);
}

#[test]
fn step_counts_rounds_and_stops() {
    let mut s = fresh(3);
    let mut rng = Scripted::new(vec![0, 0, 1, 2, 0, 1]);
    let mut rounds = 0;
    while !s.is_finished() {
        let rec = s.step(&mut rng).unwrap();
        rounds += 1;
        assert_eq!(rec.t, rounds);
        audit(&s);
    }
    assert_eq!(s.t(), rounds);
    assert_eq!(s.step(&mut rng).unwrap_err(), ProcessError::Finished);
}

#[test]
fn main_phase_conserves_vertices() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    let mut s = fresh(1000);
    let mut steps = 0u64;
    let rows = s
        .run_observed(&mut rng, 7, |st, rec| {
            steps += 1;
            let c = st.counters();
            assert_eq!(c.p + c.v1 + c.v2, 1000);
            assert_eq!(rec.t, st.t());
        })
        .unwrap();
    assert_eq!(steps, s.t());
    assert!(s.is_hamilton_path());
    let last = rows.last().unwrap();
    assert_eq!((last.p, last.v1, last.v2), (1.0, 0.0, 0.0));
    assert_eq!(last.tau, s.t() as f64 / 1000.0);
    for r in &rows {
        assert!((r.p + r.v1 + r.v2 - 1.0).abs() < 1e-12);
    }
}

#[test]
fn main_phase_mode_stops_early() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
    let cfg = Config::new(500, 4).with_stop_mode(StopMode::MainPhase { epsilon: 0.2 });
    let mut s = ProcessState::new(cfg).unwrap();
    s.run_main_phase(&mut rng, 10).unwrap();
    assert!(s.counters().p >= 400);
    assert!(s.counters().p < 402);
}

#[test]
fn event_log_line_fields() {
    let mut s = fresh(4);
    s.t = 5;
    let rec = s.apply_c5(0, &mut Scripted::default()).unwrap();
    let v: serde_json::Value = serde_json::from_str(&rec.log_line()).unwrap();
    assert_eq!(v["t"], 5);
    assert_eq!(v["case"], "C5");
    assert_eq!(v["dV1"], -2);
    assert_eq!(v["dV2"], 2);
    let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
    assert_eq!(keys.len(), 9);
}

#[test]
fn resample_keeps_degrees() {
    use rand::SeedableRng;
    let s = with_path(30, &range(0, 12));
    let (s, _) = grow_to(&s, 2, 20);
    let (s, _) = grow_to(&s, 2, 21);
    let (mut s, _) = grow_to(&s, 8, 22);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    s.resample_stubends(&mut rng);
    assert_eq!((s.stub_degree(2), s.stub_degree(8)), (2, 1));
    assert_eq!(s.counters().as_array()[3..], [1, 1, 0]);
    audit(&s);
}
