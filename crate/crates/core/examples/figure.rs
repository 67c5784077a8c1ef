//! Overlays the mean simulated trajectory on the ODE solution and writes
//! `figure.svg` plus `compare.csv` into the given directory.
//!
//! `cargo run --release --example figure -- 50000 10 figure_out`

use std::path::PathBuf;

use semirandom_hc::experiment::{
    compare_trajectories, emit_chart, run_ode, simulate, write_compare, ChartSpec, Layer, SimulateConfig,
};
use semirandom_hc::ode::{IntegrationConfig, ModelVariant};

fn main() {
    let mut args = std::env::args().skip(1);
    let n = args.next().map_or(50_000, |s| s.parse().expect("n"));
    let trials = args.next().map_or(10, |s| s.parse().expect("trials"));
    let dir = PathBuf::from(args.next().unwrap_or_else(|| "figure_out".into()));
    std::fs::create_dir_all(&dir).unwrap();

    let sim = simulate(&SimulateConfig::new(n, trials, 0)).unwrap();
    let ode = run_ode(ModelVariant::Cap3, &IntegrationConfig::default()).unwrap();
    let report = compare_trajectories(&sim.mean_rows, &ode.all_rows(), 1.8);
    let d = report.max_deviation;
    println!("max |sim - ode| for tau <= 1.8: p {:.5}, v1 {:.5}, v2 {:.5}", d.p, d.v1, d.v2);

    let ode_rows = ode.rows(1000);
    let layers = [
        Layer { label: "simulation", rows: &sim.mean_rows, dashed: false },
        Layer { label: "ODE", rows: &ode_rows, dashed: true },
    ];
    emit_chart(&layers, &ChartSpec::default(), &dir.join("figure.svg")).unwrap();
    write_compare(&dir, &report, &sim.mean_rows, &ode_rows).unwrap();
    println!("wrote {}", dir.display());
}
