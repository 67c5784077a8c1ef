//! Runs a handful of seeded trials and prints per-trial round counts.
//!
//! `cargo run --release --example simulate -- 20000 5`

use semirandom_hc::experiment::{simulate, SimulateConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let n = args.next().map_or(20_000, |s| s.parse().expect("n"));
    let trials = args.next().map_or(5, |s| s.parse().expect("trials"));

    let run = simulate(&SimulateConfig::new(n, trials, 0)).expect("valid config");
    println!("seed  main/n   closing  total/n  cycle");
    for t in &run.summary.trials {
        println!(
            "{:>4}  {:.4}  {:>7}  {:.4}   {}",
            t.seed,
            t.main_rounds as f64 / n as f64,
            t.closing_rounds.unwrap_or(0),
            t.total_rounds as f64 / n as f64,
            if t.verified == Some(true) { "ok" } else { "BAD" }
        );
    }
    println!(
        "mean total/n {:.4}, median main/n {:.4}",
        run.summary.mean_total_over_n, run.summary.median_main_over_n
    );
}
