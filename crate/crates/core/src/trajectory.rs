//! Normalized counter rows shared by the simulator and the ODE solver.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::process::Counters;

/// One sampled time point, every count divided by `n`; `tau = t / n`.
///
/// CSV header: `tau,p,v1,v2,s1,s2,s3`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub tau: f64,
    pub p: f64,
    pub v1: f64,
    pub v2: f64,
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

impl TrajectoryRow {
    pub fn from_counters(t: u64, n: usize, c: &Counters) -> Self {
        let n = n as f64;
        Self {
            tau: t as f64 / n,
            p: c.p as f64 / n,
            v1: c.v1 as f64 / n,
            v2: c.v2 as f64 / n,
            s1: c.s1 as f64 / n,
            s2: c.s2 as f64 / n,
            s3: c.s3 as f64 / n,
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
}

pub const COLUMNS: [&str; 6] = ["p", "v1", "v2", "s1", "s2", "s3"];

pub fn write_csv<W: Write>(out: W, rows: &[TrajectoryRow]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    // header is only emitted with the first record
    if rows.is_empty() {
        w.write_record(["tau", "p", "v1", "v2", "s1", "s2", "s3"])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> csv::Result<Vec<TrajectoryRow>> {
    csv::Reader::from_reader(input).deserialize().collect()
}

/// Linear interpolation of a tau-sorted trajectory; clamps at both ends.
pub fn interpolate(rows: &[TrajectoryRow], tau: f64) -> TrajectoryRow {
    assert!(!rows.is_empty(), "empty trajectory");
    let idx = rows.partition_point(|r| r.tau <= tau);
    if idx == 0 {
        return TrajectoryRow { tau, ..rows[0] };
    }
    if idx == rows.len() {
        return TrajectoryRow {
            tau,
            ..rows[rows.len() - 1]
        };
    }
    let (a, b) = (&rows[idx - 1], &rows[idx]);
    let f = (tau - a.tau) / (b.tau - a.tau);
    let (xa, xb) = (a.values(), b.values());
    let mut x = [0.0; 6];
    for i in 0..6 {
        x[i] = xa[i] + f * (xb[i] - xa[i]);
    }
    TrajectoryRow::from_values(tau, x)
}
