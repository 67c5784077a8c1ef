use serde::Serialize;

use crate::trajectory::{interpolate, TrajectoryRow, COLUMNS};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JoinedRow {
    pub tau: f64,
    pub p_sim: f64,
    pub p_ode: f64,
    pub v1_sim: f64,
    pub v1_ode: f64,
    pub v2_sim: f64,
    pub v2_ode: f64,
    pub s1_sim: f64,
    pub s1_ode: f64,
    pub s2_sim: f64,
    pub s2_ode: f64,
    pub s3_sim: f64,
    pub s3_ode: f64,
}

impl JoinedRow {
    fn new(sim: &TrajectoryRow, ode: &TrajectoryRow) -> Self {
        let (s, o) = (sim.values(), ode.values());
        Self {
            tau: sim.tau,
            p_sim: s[0],
            p_ode: o[0],
            v1_sim: s[1],
            v1_ode: o[1],
            v2_sim: s[2],
            v2_ode: o[2],
            s1_sim: s[3],
            s1_ode: o[3],
            s2_sim: s[4],
            s2_ode: o[4],
            s3_sim: s[5],
            s3_ode: o[5],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    /// Deviations are taken over sampled `tau <= tau_max`.
    pub tau_max: f64,
    pub samples: usize,
    pub max_deviation: Deviation,
    #[serde(skip)]
    pub rows: Vec<JoinedRow>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Deviation {
    pub p: f64,
    pub v1: f64,
    pub v2: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

impl Deviation {
    pub fn as_array(&self) -> [f64; 6] {
        [self.p, self.v1, self.v2, self.s1, self.s2, self.s3]
    }
}

/// Joins a simulated trajectory with the ODE one (interpolated at the
/// simulated times) and takes the sup deviation per column over
/// `tau <= tau_max`.
pub fn compare_trajectories(sim: &[TrajectoryRow], ode: &[TrajectoryRow], tau_max: f64) -> CompareReport {
    let rows: Vec<JoinedRow> = sim.iter().map(|r| JoinedRow::new(r, &interpolate(ode, r.tau))).collect();
    let mut dev = [0.0f64; COLUMNS.len()];
    let mut samples = 0;
    for r in sim.iter().filter(|r| r.tau <= tau_max) {
        samples += 1;
        let o = interpolate(ode, r.tau).values();
        for (d, (a, b)) in dev.iter_mut().zip(r.values().iter().zip(o)) {
            *d = d.max((a - b).abs());
        }
    }
    CompareReport {
        tau_max,
        samples,
        max_deviation: Deviation {
            p: dev[0],
            v1: dev[1],
            v2: dev[2],
            s1: dev[3],
            s2: dev[4],
            s3: dev[5],
        },
        rows,
    }
}
