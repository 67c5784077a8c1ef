//! Fluid limit of the strategy: six coupled ODEs in scaled time
//! `tau = t / n`, integrated with classical fixed-step RK4.
//!
//! With `s = s1 + s2 + s3`, `v = v1 + v2` and the deletion pressure
//! `b = 2 s (v1 + 2 v2) / v^2 + 2 v2 / v`:
//!
//! ```text
//! p'  = 2 v2 + 2 s (v1 + 2 v2) / v
//! v1' = -2 v1 - 2 s v1 / v
//! v2' = -2 v2 + 2 v1 - 4 s v2 / v
//! s1' = p - 5 s - 3 s1 + 2 s2 + b (2 s2 - s1)
//! s2' = s1 - 3 s2 + 2 s3 + b (3 s3 - 2 s2)
//! s3' = s2 - 2 s3 - 3 b s3
//! ```
//!
//! The cap-2 variant drops the 2-stub to 3-stub flow:
//! `s2' = s1 - 2 s2 - 2 b s2`, `s3 = s3' = 0`.

use serde::Serialize;
use thiserror::Error;

use crate::trajectory::TrajectoryRow;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OdeError {
    #[error("fluid state exhausted: v = {v:e} below floor {floor:e}")]
    Exhausted { v: f64, floor: f64 },
    #[error("non-finite value at tau = {tau}")]
    NonFinite { tau: f64 },
    #[error("invalid integration config: {0}")]
    BadConfig(&'static str),
    #[error("p never reached 1 - delta = {0} before tau_max")]
    DidNotComplete(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModelVariant {
    Cap2,
    Cap3,
}

impl ModelVariant {
    pub fn from_cap(cap: u8) -> Option<Self> {
        match cap {
            2 => Some(Self::Cap2),
            3 => Some(Self::Cap3),
            _ => None,
        }
    }

    pub fn cap(self) -> u8 {
        match self {
            Self::Cap2 => 2,
            Self::Cap3 => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct FluidState {
    pub tau: f64,
    pub p: f64,
    pub v1: f64,
    pub v2: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

impl FluidState {
    /// Everything isolated at time zero.
    pub fn initial() -> Self {
        Self {
            v1: 1.0,
            ..Self::default()
        }
    }

    pub fn values(&self) -> [f64; 6] {
        [self.p, self.v1, self.v2, self.s1, self.s2, self.s3]
    }

    pub fn from_values(tau: f64, x: [f64; 6]) -> Self {
        Self {
            tau,
            p: x[0],
            v1: x[1],
            v2: x[2],
            s1: x[3],
            s2: x[4],
            s3: x[5],
        }
    }

    pub fn nonpath(&self) -> f64 {
        self.v1 + self.v2
    }

    pub fn to_row(&self) -> TrajectoryRow {
        TrajectoryRow::from_values(self.tau, self.values())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegrationConfig {
    pub step: f64,
    /// Stop once `p >= 1 - delta` or `v <= delta`. The default `1e-6`
    /// leaves `tau*` within `1e-3` of its `delta -> 0` limit.
    pub delta: f64,
    pub tau_max: f64,
    pub v_floor: f64,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        Self {
            step: 1e-4,
            delta: 1e-6,
            tau_max: 3.0,
            v_floor: 1e-9,
        }
    }
}

impl IntegrationConfig {
    pub fn validate(&self) -> Result<(), OdeError> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(OdeError::BadConfig("step must be positive"));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(OdeError::BadConfig("delta must lie in (0, 1)"));
        }
        if !(self.tau_max > 0.0) {
            return Err(OdeError::BadConfig("tau_max must be positive"));
        }
        if !(self.v_floor > 0.0 && self.v_floor < self.delta) {
            return Err(OdeError::BadConfig("v_floor must lie in (0, delta)"));
        }
        Ok(())
    }
}

/// Right-hand side of the fluid system; `tau` of the result is unused (0).
pub fn derivatives(fs: &FluidState, variant: ModelVariant, v_floor: f64) -> Result<FluidState, OdeError> {
    let v = fs.v1 + fs.v2;
    if v < v_floor {
        return Err(OdeError::Exhausted { v, floor: v_floor });
    }
    let x = rates(fs.values(), variant);
    Ok(FluidState::from_values(0.0, x))
}

fn rates(x: [f64; 6], variant: ModelVariant) -> [f64; 6] {
    let [p, v1, v2, s1, s2, s3] = x;
    let v = v1 + v2;
    let s = s1 + s2 + s3;
    let pressure = 2.0 * s * (v1 + 2.0 * v2) / (v * v) + 2.0 * v2 / v;
    let dp = 2.0 * v2 + 2.0 * s * (v1 + 2.0 * v2) / v;
    let dv1 = -2.0 * v1 - 2.0 * s * v1 / v;
    let dv2 = -2.0 * v2 + 2.0 * v1 - 4.0 * s * v2 / v;
    let ds1 = p - 5.0 * s - 3.0 * s1 + 2.0 * s2 + pressure * (2.0 * s2 - s1);
    match variant {
        ModelVariant::Cap3 => {
            let ds2 = s1 - 3.0 * s2 + 2.0 * s3 + pressure * (3.0 * s3 - 2.0 * s2);
            let ds3 = s2 - 2.0 * s3 - pressure * 3.0 * s3;
            [dp, dv1, dv2, ds1, ds2, ds3]
        }
        ModelVariant::Cap2 => {
            let ds2 = s1 - 2.0 * s2 - pressure * 2.0 * s2;
            [dp, dv1, dv2, ds1, ds2, 0.0]
        }
    }
}

fn axpy(x: &[f64; 6], a: f64, k: &[f64; 6]) -> [f64; 6] {
    std::array::from_fn(|i| x[i] + a * k[i])
}

fn rk4_step(x: &[f64; 6], h: f64, variant: ModelVariant) -> [f64; 6] {
    let k1 = rates(*x, variant);
    let k2 = rates(axpy(x, h / 2.0, &k1), variant);
    let k3 = rates(axpy(x, h / 2.0, &k2), variant);
    let k4 = rates(axpy(x, h, &k3), variant);
    std::array::from_fn(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
}

/// Integrates from the initial condition, recording every step, until
/// `p >= 1 - delta`, `v <= delta`, or `tau >= tau_max`.
pub fn integrate(variant: ModelVariant, cfg: &IntegrationConfig) -> Result<Vec<FluidState>, OdeError> {
    cfg.validate()?;
    let mut traj = vec![FluidState::initial()];
    let mut x = FluidState::initial().values();
    let mut k: u64 = 0;
    loop {
        let tau = k as f64 * cfg.step;
        let done = x[0] >= 1.0 - cfg.delta || x[1] + x[2] <= cfg.delta || tau >= cfg.tau_max;
        if done {
            break;
        }
        if x[1] + x[2] < cfg.v_floor {
            return Err(OdeError::Exhausted {
                v: x[1] + x[2],
                floor: cfg.v_floor,
            });
        }
        x = rk4_step(&x, cfg.step, variant);
        k += 1;
        if x.iter().any(|c| !c.is_finite()) {
            return Err(OdeError::NonFinite {
                tau: k as f64 * cfg.step,
            });
        }
        traj.push(FluidState::from_values(k as f64 * cfg.step, x));
    }
    Ok(traj)
}

/// Time at which `p` first crosses `1 - delta`, interpolated linearly
/// between the bracketing steps.
pub fn tau_star(trajectory: &[FluidState], delta: f64) -> Result<f64, OdeError> {
    let level = 1.0 - delta;
    let i = trajectory
        .iter()
        .position(|fs| fs.p >= level)
        .ok_or(OdeError::DidNotComplete(level))?;
    if i == 0 {
        return Ok(trajectory[0].tau);
    }
    let (a, b) = (&trajectory[i - 1], &trajectory[i]);
    Ok(a.tau + (level - a.p) / (b.p - a.p) * (b.tau - a.tau))
}

/// Largest `s3` along a trajectory.
pub fn max_s3(trajectory: &[FluidState]) -> f64 {
    trajectory.iter().map(|fs| fs.s3).fold(0.0, f64::max)
}

/// Every `every`-th state as a trajectory row, always keeping the last.
pub fn thin_rows(trajectory: &[FluidState], every: usize) -> Vec<TrajectoryRow> {
    let every = every.max(1);
    let mut rows: Vec<_> = trajectory.iter().step_by(every).map(FluidState::to_row).collect();
    if !(trajectory.len() - 1).is_multiple_of(every) {
        rows.push(trajectory[trajectory.len() - 1].to_row());
    }
    rows
}
