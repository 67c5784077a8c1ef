//! Seeded multi-trial experiments, ODE runs, and their comparison.
//!
//! Trial `i` of a run with base seed `s` uses seed `s + i` both for its
//! [`Config`] and for its `ChaCha8Rng`. Trials run in parallel and are
//! merged in seed order, so results do not depend on the thread count.

mod chart;
mod compare;
mod output;

use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::closer::{close_cycle, CloseError};
use crate::ode::{self, FluidState, IntegrationConfig, ModelVariant, OdeError};
use crate::process::{Config, HitClass, ProcessError, ProcessState, StopMode, StubHits, VertexId};
use crate::trajectory::{interpolate, TrajectoryRow};
use crate::verifier::{self, check_invariants, HitStatistic, Violation, MIN_HIT_EVENTS};

pub use chart::{emit_chart, render_svg, ChartSpec, Layer, SERIES_COLORS};
pub use compare::{compare_trajectories, CompareReport, JoinedRow};
pub use output::{write_compare, write_json, write_ode, write_simulation};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Process(#[from] ProcessError),
    #[error(transparent)]
    Close(#[from] CloseError),
    #[error(transparent)]
    Ode(#[from] OdeError),
    #[error("trial with seed {seed} failed verification")]
    Unverified { seed: u64 },
    #[error("{} invariant violation(s), first: {}", .0.len(), .0[0].json_line())]
    Violations(Vec<Violation>),
    #[error("at least one trial is required")]
    NoTrials,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Parameters of a multi-trial simulation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulateConfig {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub cap: u8,
    pub pairing_enabled: bool,
    pub stop_mode: StopMode,
    pub sample_every: u64,
    pub record_hits: bool,
}

impl SimulateConfig {
    pub fn new(n: usize, trials: usize, seed: u64) -> Self {
        Self {
            n,
            trials,
            seed,
            cap: 3,
            pairing_enabled: true,
            stop_mode: StopMode::FullCycle,
            sample_every: default_sample_every(n),
            record_hits: false,
        }
    }

    pub fn trial_config(&self, index: usize) -> Config {
        Config::new(self.n, self.seed.wrapping_add(index as u64))
            .with_cap(self.cap)
            .with_pairing(self.pairing_enabled)
            .with_stop_mode(self.stop_mode)
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.trials == 0 {
            return Err(ExperimentError::NoTrials);
        }
        self.trial_config(0).validate()?;
        Ok(())
    }
}

/// About 1000 rows per trajectory: `max(1, 2n / 1000)` rounds apart.
pub fn default_sample_every(n: usize) -> u64 {
    ((2 * n) / 1000).max(1) as u64
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialSummary {
    pub seed: u64,
    /// Rounds until the main phase stopped.
    pub main_rounds: u64,
    pub closing_rounds: Option<u64>,
    pub total_rounds: u64,
    /// Whether the final cycle checked out; `None` in main-phase mode.
    pub verified: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct TrialResult {
    pub summary: TrialSummary,
    pub rows: Vec<TrajectoryRow>,
    pub hits: Vec<StubHits>,
    pub cycle: Option<Vec<VertexId>>,
}

/// Runs one seeded trial; `config.seed` drives the RNG.
pub fn run_trial(config: Config, sample_every: u64, record_hits: bool) -> Result<TrialResult, ExperimentError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut state = ProcessState::new(config)?;
    let mut hits = Vec::new();
    let rows = state.run_observed(&mut rng, sample_every, |_, rec| {
        if record_hits {
            if let Some(h) = rec.stub_hits {
                hits.push(h);
            }
        }
    })?;
    let main_rounds = state.t();
    let mut summary = TrialSummary {
        seed: config.seed,
        main_rounds,
        closing_rounds: None,
        total_rounds: main_rounds,
        verified: None,
    };
    let mut cycle = None;
    if config.stop_mode == StopMode::FullCycle {
        let out = close_cycle(&state, &mut rng)?;
        summary.closing_rounds = Some(out.rounds_used);
        summary.total_rounds += out.rounds_used;
        let mut edges = state.graph_edges().to_vec();
        edges.extend(&out.edges);
        let edge_budget = edges.len() as u64 <= summary.total_rounds;
        summary.verified = Some(edge_budget && verifier::verify_hamilton_cycle(&out.cycle, &edges, config.n));
        cycle = Some(out.cycle);
    }
    Ok(TrialResult {
        summary,
        rows,
        hits,
        cycle,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub config: SimulateConfig,
    pub trials: Vec<TrialSummary>,
    pub mean_total_over_n: f64,
    pub median_total_over_n: f64,
    pub stddev_total_over_n: f64,
    pub mean_main_over_n: f64,
    pub median_main_over_n: f64,
    pub tau_star: Option<f64>,
    /// Pooled stubend hit statistics for classes with enough events.
    pub hit_statistics: Vec<HitStatistic>,
}

#[derive(Debug, Clone)]
pub struct SimulationRun {
    pub summary: RunSummary,
    pub trials: Vec<TrialResult>,
    pub mean_rows: Vec<TrajectoryRow>,
}

/// Runs all trials in parallel and aggregates them in seed order.
pub fn simulate(cfg: &SimulateConfig) -> Result<SimulationRun, ExperimentError> {
    cfg.validate()?;
    let trials: Vec<TrialResult> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_trial(cfg.trial_config(i), cfg.sample_every, cfg.record_hits))
        .collect::<Result<_, _>>()?;
    let n = cfg.n as f64;
    let totals: Vec<f64> = trials.iter().map(|t| t.summary.total_rounds as f64 / n).collect();
    let mains: Vec<f64> = trials.iter().map(|t| t.summary.main_rounds as f64 / n).collect();
    let mut hit_statistics = Vec::new();
    if cfg.record_hits {
        for class in [HitClass::C6, HitClass::C3Isolated, HitClass::C3Paired] {
            let pooled = trials.iter().flat_map(|t| t.hits.iter());
            if let Ok(s) = verifier::hit_statistic_with_min(pooled, class, MIN_HIT_EVENTS) {
                hit_statistics.push(s);
            }
        }
    }
    let per_trial: Vec<&[TrajectoryRow]> = trials.iter().map(|t| t.rows.as_slice()).collect();
    let mean_rows = mean_trajectory(&per_trial, cfg.sample_every as f64 / n);
    let summary = RunSummary {
        config: *cfg,
        trials: trials.iter().map(|t| t.summary.clone()).collect(),
        mean_total_over_n: mean(&totals),
        median_total_over_n: median(&totals),
        stddev_total_over_n: stddev(&totals),
        mean_main_over_n: mean(&mains),
        median_main_over_n: median(&mains),
        tau_star: None,
        hit_statistics,
    };
    Ok(SimulationRun {
        summary,
        trials,
        mean_rows,
    })
}

/// Pointwise mean of several trajectories on the grid `k * spacing`,
/// out to the longest one. Trials that already stopped contribute their
/// final state.
pub fn mean_trajectory(trajectories: &[&[TrajectoryRow]], spacing: f64) -> Vec<TrajectoryRow> {
    let trajectories: Vec<_> = trajectories.iter().filter(|t| !t.is_empty()).collect();
    if trajectories.is_empty() {
        return Vec::new();
    }
    let end = trajectories
        .iter()
        .map(|t| t[t.len() - 1].tau)
        .fold(0.0, f64::max);
    let steps = (end / spacing).ceil() as usize;
    let k = trajectories.len() as f64;
    (0..=steps)
        .map(|i| {
            let tau = (i as f64 * spacing).min(end);
            let mut acc = [0.0; 6];
            for t in &trajectories {
                let x = interpolate(t, tau).values();
                for (a, b) in acc.iter_mut().zip(x) {
                    *a += b;
                }
            }
            TrajectoryRow::from_values(tau, acc.map(|a| a / k))
        })
        .collect()
}

pub fn mean(x: &[f64]) -> f64 {
    if x.is_empty() {
        return f64::NAN;
    }
    x.iter().sum::<f64>() / x.len() as f64
}

pub fn median(x: &[f64]) -> f64 {
    quantile(x, 0.5)
}

/// Linear-interpolated quantile, `q` in `[0, 1]`.
pub fn quantile(x: &[f64], q: f64) -> f64 {
    if x.is_empty() {
        return f64::NAN;
    }
    let mut s = x.to_vec();
    s.sort_by(f64::total_cmp);
    let pos = q.clamp(0.0, 1.0) * (s.len() - 1) as f64;
    let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
    s[lo] + (pos - lo as f64) * (s[hi] - s[lo])
}

/// Sample standard deviation; zero for fewer than two values.
pub fn stddev(x: &[f64]) -> f64 {
    if x.len() < 2 {
        return 0.0;
    }
    let m = mean(x);
    (x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (x.len() - 1) as f64).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OdeSummary {
    pub cap: u8,
    pub step: f64,
    pub delta: f64,
    pub tau_star: f64,
    pub max_s3: f64,
    pub final_state: FluidState,
}

#[derive(Debug, Clone)]
pub struct OdeRun {
    pub summary: OdeSummary,
    pub trajectory: Vec<FluidState>,
}

impl OdeRun {
    /// About `target` evenly spaced rows, endpoints kept.
    pub fn rows(&self, target: usize) -> Vec<TrajectoryRow> {
        let every = self.trajectory.len().div_ceil(target.max(1));
        ode::thin_rows(&self.trajectory, every)
    }

    pub fn all_rows(&self) -> Vec<TrajectoryRow> {
        self.trajectory.iter().map(FluidState::to_row).collect()
    }
}

pub fn run_ode(variant: ModelVariant, cfg: &IntegrationConfig) -> Result<OdeRun, ExperimentError> {
    let trajectory = ode::integrate(variant, cfg)?;
    let summary = OdeSummary {
        cap: variant.cap(),
        step: cfg.step,
        delta: cfg.delta,
        tau_star: ode::tau_star(&trajectory, cfg.delta)?,
        max_s3: ode::max_s3(&trajectory),
        final_state: *trajectory.last().expect("trajectory starts with the initial state"),
    };
    Ok(OdeRun { summary, trajectory })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub config: Config,
    pub rounds: u64,
    pub checks: u64,
    pub violations: Vec<Violation>,
    pub cycle_verified: Option<bool>,
}

/// Replays one seeded run exactly as [`run_trial`] does, auditing the
/// state after every `check_every`-th round and at the end.
pub fn audit_run(config: Config, check_every: u64) -> Result<AuditReport, ExperimentError> {
    let every = check_every.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut state = ProcessState::new(config)?;
    let mut violations = check_invariants(&state);
    let mut checks = 1;
    state.run_observed(&mut rng, u64::MAX, |s, _| {
        if s.t() % every == 0 || s.is_finished() {
            checks += 1;
            violations.extend(check_invariants(s));
        }
    })?;
    let mut cycle_verified = None;
    if config.stop_mode == StopMode::FullCycle {
        let out = close_cycle(&state, &mut rng)?;
        let mut edges: HashSet<(VertexId, VertexId)> = state.graph_edges().iter().copied().collect();
        edges.extend(&out.edges);
        let edges: Vec<_> = edges.into_iter().collect();
        cycle_verified = Some(verifier::verify_hamilton_cycle(&out.cycle, &edges, config.n));
    }
    Ok(AuditReport {
        config,
        rounds: state.t(),
        checks,
        violations,
        cycle_verified,
    })
}
