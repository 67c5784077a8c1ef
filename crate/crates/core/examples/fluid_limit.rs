//! Integrates both cap variants and prints completion times and a coarse table.

use semirandom_hc::ode::{integrate, max_s3, tau_star, thin_rows, IntegrationConfig, ModelVariant};

fn main() {
    let cfg = IntegrationConfig::default();
    for variant in [ModelVariant::Cap3, ModelVariant::Cap2] {
        let rows = integrate(variant, &cfg).expect("integrates");
        let t = tau_star(&rows, cfg.delta).expect("reaches completion");
        println!("cap {}: tau* = {t:.6}, max s3 = {:.6}", variant.cap(), max_s3(&rows));
    }

    let rows = integrate(ModelVariant::Cap3, &cfg).unwrap();
    println!("\n  tau      p       v1      v2      s1      s2      s3");
    for r in thin_rows(&rows, 1000) {
        println!(
            "{:.3}  {:.4}  {:.4}  {:.4}  {:.4}  {:.4}  {:.5}",
            r.tau, r.p, r.v1, r.v2, r.s1, r.s2, r.s3
        );
    }

    println!("\ncompletion threshold sensitivity (cap 3):");
    for delta in [1e-3, 1e-4, 1e-5, 1e-6, 1e-7] {
        let cfg = IntegrationConfig { delta, v_floor: (delta * 1e-3).min(1e-9), ..cfg };
        let rows = integrate(ModelVariant::Cap3, &cfg).unwrap();
        println!("  delta {delta:e}: tau* = {:.6}", tau_star(&rows, delta).unwrap());
    }
}
