use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use semirandom_hc::closer::{close_cycle, ClosureState};
use semirandom_hc::process::{PathLinks, Role, VertexId};
use semirandom_hc::trajectory::{read_csv, write_csv};
use semirandom_hc::verifier::{check_invariants, expected_step_deferred, verify_hamilton_cycle};
use semirandom_hc::{Config, ProcessState, TrajectoryRow};

fn run_audited(config: Config, seed: u64) -> ProcessState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = ProcessState::new(config).unwrap();
    let n = s.n();
    while !s.is_finished() {
        let before = s.counters();
        s.step(&mut rng).unwrap();
        let c = s.counters();
        let v = check_invariants(&s);
        assert!(v.is_empty(), "t={} {:?}", s.t(), v);
        assert_eq!(c.p + c.v1 + c.v2, n);
        assert!(c.p >= before.p);
        assert!(c.v1 <= before.v1);
        assert!(c.s3 == 0 || s.config().cap == 3);
        if c.p > 0 && c.stubs() > 0 {
            let clear = (0..n as VertexId).filter(|&v| s.role(v) == Role::Clear).count();
            assert_eq!(clear, c.p.saturating_sub(5 * c.stubs()));
        }
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn full_runs_keep_invariants(n in 3usize..160, seed in any::<u64>(), cap in 2u8..=3, pairing in any::<bool>()) {
        let config = Config::new(n, seed).with_cap(cap).with_pairing(pairing);
        let s = run_audited(config, seed);
        prop_assert!(s.is_hamilton_path());
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let out = close_cycle(&s, &mut rng).unwrap();
        let mut edges = s.graph_edges().to_vec();
        edges.extend(&out.edges);
        prop_assert!(verify_hamilton_cycle(&out.cycle, &edges, n));
        prop_assert!(edges.len() as u64 <= s.t() + out.rounds_used);
    }

    #[test]
    fn stub_separation_holds(n in 20usize..200, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = ProcessState::new(Config::new(n, seed)).unwrap();
        while !s.is_finished() {
            s.step(&mut rng).unwrap();
            let roots: Vec<usize> = s
                .path()
                .iter()
                .enumerate()
                .filter(|&(_, v)| s.role(v) == Role::Stub)
                .map(|(i, _)| i)
                .collect();
            for w in roots.windows(2) {
                prop_assert!(w[1] - w[0] >= 3, "stubs at path positions {} and {}", w[0], w[1]);
            }
        }
    }

    #[test]
    fn deferred_expectation_conserves_mass(n in 20usize..120, seed in any::<u64>(), stop in 0.0f64..0.9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = ProcessState::new(Config::new(n, seed)).unwrap();
        let rounds = (stop * n as f64) as usize;
        for _ in 0..rounds {
            if s.is_finished() { break; }
            s.step(&mut rng).unwrap();
        }
        if s.counters().nonpath() >= 2 {
            let e = expected_step_deferred(&s).unwrap();
            prop_assert_eq!(e.mass_numerator(), 0);
        }
    }

    #[test]
    fn path_links_match_vec_model(n in 2usize..40, ops in prop::collection::vec((any::<bool>(), any::<prop::sample::Index>(), 1usize..4), 1..60)) {
        let mut links = PathLinks::new(n);
        let mut model: Vec<VertexId> = Vec::new();
        let mut unused: Vec<VertexId> = (0..n as VertexId).rev().collect();
        for (splice, at, k) in ops {
            if unused.is_empty() { break; }
            if splice && model.len() >= 2 {
                let i = at.index(model.len() - 1);
                let k = k.min(unused.len());
                let ins: Vec<VertexId> = (0..k).map(|_| unused.pop().unwrap()).collect();
                let (a, b) = (model[i], model[i + 1]);
                if at.index(2) == 0 {
                    links.splice_between(a, b, &ins);
                    model.splice(i + 1..i + 1, ins.iter().copied());
                } else {
                    links.splice_between(b, a, &ins);
                    model.splice(i + 1..i + 1, ins.iter().rev().copied());
                }
            } else {
                let v = unused.pop().unwrap();
                links.push_back(v);
                model.push(v);
            }
            prop_assert_eq!(links.to_vec(), model.clone());
            prop_assert_eq!(links.len(), model.len());
            prop_assert_eq!(links.head(), model.first().copied());
            prop_assert_eq!(links.tail(), model.last().copied());
        }
    }

    #[test]
    fn closer_handles_any_order(order in Just((0..300u32).collect::<Vec<_>>()).prop_shuffle(), seed in any::<u64>()) {
        let n = order.len();
        let path_edges: Vec<(VertexId, VertexId)> = order.windows(2).map(|w| (w[0], w[1])).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let out = ClosureState::new(order).unwrap().run(&mut rng);
        let mut edges = path_edges;
        edges.extend(&out.edges);
        prop_assert!(verify_hamilton_cycle(&out.cycle, &edges, n));
        prop_assert!(out.edges.len() as u64 <= out.rounds_used);
    }

    #[test]
    fn trajectory_csv_roundtrips(rows in prop::collection::vec(prop::array::uniform7(0.0f64..2.0), 0..20)) {
        let rows: Vec<TrajectoryRow> = rows
            .iter()
            .map(|r| TrajectoryRow::from_values(r[0], [r[1], r[2], r[3], r[4], r[5], r[6]]))
            .collect();
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).unwrap();
        let back = read_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(back, rows);
    }
}
