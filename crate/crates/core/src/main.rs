use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use semirandom_hc::experiment::{
    audit_run, compare_trajectories, run_ode, simulate, write_compare, write_ode,
    write_simulation, ExperimentError, SimulateConfig,
};
use semirandom_hc::ode::{IntegrationConfig, ModelVariant};
use semirandom_hc::{Config, StopMode};

#[derive(Parser)]
#[command(name = "semirandom-hc", version, about = "Paired-stub Hamilton cycle strategy: simulation and fluid limit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded trials of the process
    Simulate(SimulateArgs),
    /// Integrate the fluid-limit ODEs
    Ode(OdeArgs),
    /// Simulate and integrate, then compare trajectories
    Compare(CompareArgs),
    /// Replay one run with an invariant audit after every round
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Toggle {
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    MainPhase,
    FullCycle,
}

#[derive(Args)]
struct ProcessArgs {
    #[arg(long, default_value_t = 100_000)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(2..=3))]
    cap: u8,
    #[arg(long, value_enum, default_value_t = Toggle::On)]
    pairing: Toggle,
    #[arg(long, value_enum, default_value_t = Mode::FullCycle)]
    mode: Mode,
    /// Main-phase stop: path holds at least (1 - epsilon) n vertices
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
}

impl ProcessArgs {
    fn stop_mode(&self) -> StopMode {
        match self.mode {
            Mode::MainPhase => StopMode::MainPhase { epsilon: self.epsilon },
            Mode::FullCycle => StopMode::FullCycle,
        }
    }

    fn sim_config(&self, trials: usize, sample_every: Option<u64>) -> SimulateConfig {
        let mut cfg = SimulateConfig::new(self.n, trials, self.seed);
        cfg.cap = self.cap;
        cfg.pairing_enabled = matches!(self.pairing, Toggle::On);
        cfg.stop_mode = self.stop_mode();
        cfg.record_hits = true;
        if let Some(k) = sample_every {
            cfg.sample_every = k;
        }
        cfg
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    process: ProcessArgs,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    /// Rounds between trajectory rows [default: max(1, 2n/1000)]
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    sample_every: Option<u64>,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct IntegrationArgs {
    #[arg(long, default_value_t = IntegrationConfig::default().step)]
    step: f64,
    /// Completion threshold: stop once p >= 1 - delta
    #[arg(long, default_value_t = IntegrationConfig::default().delta)]
    delta: f64,
}

impl IntegrationArgs {
    fn config(&self) -> IntegrationConfig {
        IntegrationConfig {
            step: self.step,
            delta: self.delta,
            v_floor: (self.delta * 1e-3).min(IntegrationConfig::default().v_floor),
            ..IntegrationConfig::default()
        }
    }
}

#[derive(Args)]
struct OdeArgs {
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(2..=3))]
    cap: u8,
    #[command(flatten)]
    integration: IntegrationArgs,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    process: ProcessArgs,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    sample_every: Option<u64>,
    #[command(flatten)]
    integration: IntegrationArgs,
    /// Deviations are measured for tau up to this value
    #[arg(long, default_value_t = 1.8)]
    tau_max: f64,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    process: ProcessArgs,
    /// Audit after every k-th round
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    check_every: u64,
}

enum Failure {
    Usage(String),
    Invariant(String),
    Runtime(String),
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Violations(_) | ExperimentError::Unverified { .. } => Failure::Invariant(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn ode_variant(cap: u8) -> ModelVariant {
    ModelVariant::from_cap(cap).expect("cap restricted to 2..=3 by the parser")
}

fn run_simulate(args: &SimulateArgs) -> Result<(), Failure> {
    let cfg = args.process.sim_config(args.trials, args.sample_every);
    cfg.validate().map_err(usage)?;
    let run = simulate(&cfg)?;
    write_simulation(&args.out_dir, &run)?;
    let s = &run.summary;
    println!(
        "trials={} mean_total_over_n={:.6} median_total_over_n={:.6} stddev={:.6} median_main_over_n={:.6}",
        s.trials.len(),
        s.mean_total_over_n,
        s.median_total_over_n,
        s.stddev_total_over_n,
        s.median_main_over_n
    );
    for h in &s.hit_statistics {
        println!("{:?}: events={} rate={:.6} expected={:.6} z={:.3}", h.class, h.events, h.empirical_rate, h.expected_rate, h.z);
    }
    if let Some(t) = s.trials.iter().find(|t| t.verified == Some(false)) {
        return Err(ExperimentError::Unverified { seed: t.seed }.into());
    }
    Ok(())
}

fn run_ode_cmd(args: &OdeArgs) -> Result<(), Failure> {
    let cfg = args.integration.config();
    cfg.validate().map_err(usage)?;
    let run = run_ode(ode_variant(args.cap), &cfg)?;
    write_ode(&args.out_dir, &run)?;
    println!(
        "cap={} tau_star={:.6} max_s3={:.6}",
        run.summary.cap, run.summary.tau_star, run.summary.max_s3
    );
    Ok(())
}

fn run_compare(args: &CompareArgs) -> Result<(), Failure> {
    let cfg = args.process.sim_config(args.trials, args.sample_every);
    cfg.validate().map_err(usage)?;
    let icfg = args.integration.config();
    icfg.validate().map_err(usage)?;
    let mut sim = simulate(&cfg)?;
    let ode = run_ode(ode_variant(args.process.cap), &icfg)?;
    sim.summary.tau_star = Some(ode.summary.tau_star);
    let report = compare_trajectories(&sim.mean_rows, &ode.all_rows(), args.tau_max);
    write_simulation(&args.out_dir, &sim)?;
    write_ode(&args.out_dir, &ode)?;
    write_compare(&args.out_dir, &report, &sim.mean_rows, &ode.rows(1000))?;
    let d = report.max_deviation;
    println!(
        "tau<={} samples={} max|sim-ode|: p={:.6} v1={:.6} v2={:.6} s1={:.6} s2={:.6} s3={:.6}",
        report.tau_max, report.samples, d.p, d.v1, d.v2, d.s1, d.s2, d.s3
    );
    println!(
        "tau_star={:.6} median_main_over_n={:.6} mean_total_over_n={:.6}",
        ode.summary.tau_star, sim.summary.median_main_over_n, sim.summary.mean_total_over_n
    );
    Ok(())
}

fn run_verify(args: &VerifyArgs) -> Result<(), Failure> {
    let p = &args.process;
    let config = Config::new(p.n, p.seed)
        .with_cap(p.cap)
        .with_pairing(matches!(p.pairing, Toggle::On))
        .with_stop_mode(p.stop_mode());
    config.validate().map_err(usage)?;
    let report = audit_run(config, args.check_every)?;
    for v in &report.violations {
        println!("{}", v.json_line());
    }
    eprintln!(
        "rounds={} checks={} violations={} cycle_verified={:?}",
        report.rounds,
        report.checks,
        report.violations.len(),
        report.cycle_verified
    );
    if !report.violations.is_empty() {
        return Err(ExperimentError::Violations(report.violations).into());
    }
    if report.cycle_verified == Some(false) {
        return Err(ExperimentError::Unverified { seed: p.seed }.into());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match &cli.command {
        Command::Simulate(a) => run_simulate(a),
        Command::Ode(a) => run_ode_cmd(a),
        Command::Compare(a) => run_compare(a),
        Command::Verify(a) => run_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\nRun with --help for usage.");
            ExitCode::from(1)
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("invariant violation: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
