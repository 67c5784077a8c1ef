//! Closing rounds for a Hamilton path of growing length, against sqrt(n).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use semirandom_hc::closer::ClosureState;
use semirandom_hc::experiment::quantile;
use semirandom_hc::process::VertexId;

fn main() {
    for n in [100usize, 1_000, 10_000, 100_000] {
        let rounds: Vec<f64> = (0..50u64)
            .map(|seed| {
                let order: Vec<VertexId> = (0..n as VertexId).collect();
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                ClosureState::new(order).unwrap().run(&mut rng).rounds_used as f64
            })
            .collect();
        let root = (n as f64).sqrt();
        println!(
            "n={n:>6}  median {:>6.1} ({:.2} sqrt n)  p95 {:>6.1} ({:.2} sqrt n)",
            quantile(&rounds, 0.5),
            quantile(&rounds, 0.5) / root,
            quantile(&rounds, 0.95),
            quantile(&rounds, 0.95) / root
        );
    }
}
