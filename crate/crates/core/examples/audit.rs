//! Steps a run by hand, auditing invariants and printing the event log.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use semirandom_hc::verifier::check_invariants;
use semirandom_hc::{Config, ProcessState};

fn main() {
    let n = 30;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut s = ProcessState::new(Config::new(n, 1).with_cap(2)).unwrap();
    while !s.is_finished() {
        let event = s.step(&mut rng).unwrap();
        println!("{}", event.log_line());
        let violations = check_invariants(&s);
        assert!(violations.is_empty(), "{violations:?}");
    }
    println!("path: {:?}", s.path().to_vec());
}
