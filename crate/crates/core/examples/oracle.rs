//! Compares the exact one-round expectation with the drift formulas along a run.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use semirandom_hc::verifier::{expectation_formulas, expected_step_deferred};
use semirandom_hc::{Config, ProcessState};

fn main() {
    let n = 400;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut s = ProcessState::new(Config::new(n, 0)).unwrap();
    println!("    t    V   n*max|exact - formula|");
    while !s.is_finished() {
        if s.t().is_multiple_of(50) && s.counters().nonpath() >= 2 {
            let exact = expected_step_deferred(&s).unwrap();
            let diff = exact.to_vector().max_abs_diff(&expectation_formulas(&s));
            println!("{:>5} {:>4}   {:.3}", s.t(), s.counters().nonpath(), diff * n as f64);
        }
        s.step(&mut rng).unwrap();
    }
}
