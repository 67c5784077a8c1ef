use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::chart::{emit_chart, ChartSpec, Layer};
use super::{CompareReport, ExperimentError, OdeRun, SimulationRun};
use crate::trajectory::{write_csv, TrajectoryRow};

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), ExperimentError> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

fn write_rows(path: &Path, rows: &[TrajectoryRow]) -> Result<(), ExperimentError> {
    write_csv(BufWriter::new(File::create(path)?), rows)?;
    Ok(())
}

/// Writes `summary.json`, `mean.csv`, `chart.svg` and one
/// `trials/trial_<seed>.csv` per trial. Returns the written paths.
pub fn write_simulation(dir: &Path, run: &SimulationRun) -> Result<Vec<PathBuf>, ExperimentError> {
    let trials_dir = dir.join("trials");
    fs::create_dir_all(&trials_dir)?;
    let mut paths = vec![dir.join("summary.json"), dir.join("mean.csv"), dir.join("chart.svg")];
    write_json(&paths[0], &run.summary)?;
    write_rows(&paths[1], &run.mean_rows)?;
    let layer = Layer {
        label: "simulation mean",
        rows: &run.mean_rows,
        dashed: false,
    };
    emit_chart(&[layer], &ChartSpec::default(), &paths[2])?;
    for t in &run.trials {
        let p = trials_dir.join(format!("trial_{}.csv", t.summary.seed));
        write_rows(&p, &t.rows)?;
        paths.push(p);
    }
    Ok(paths)
}

/// Writes `ode_cap<k>.csv` (about 1000 rows), `ode_summary.json` and
/// `ode_chart.svg`.
pub fn write_ode(dir: &Path, run: &OdeRun) -> Result<Vec<PathBuf>, ExperimentError> {
    fs::create_dir_all(dir)?;
    let rows = run.rows(1000);
    let paths = vec![
        dir.join(format!("ode_cap{}.csv", run.summary.cap)),
        dir.join("ode_summary.json"),
        dir.join("ode_chart.svg"),
    ];
    write_rows(&paths[0], &rows)?;
    write_json(&paths[1], &run.summary)?;
    let layer = Layer {
        label: "fluid limit",
        rows: &rows,
        dashed: false,
    };
    emit_chart(&[layer], &ChartSpec::default(), &paths[2])?;
    Ok(paths)
}

/// Writes `compare.csv`, `compare.json` and `compare.svg`.
pub fn write_compare(
    dir: &Path,
    report: &CompareReport,
    sim: &[TrajectoryRow],
    ode: &[TrajectoryRow],
) -> Result<Vec<PathBuf>, ExperimentError> {
    fs::create_dir_all(dir)?;
    let paths = vec![dir.join("compare.csv"), dir.join("compare.json"), dir.join("compare.svg")];
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(&paths[0])?));
    for r in &report.rows {
        w.serialize(r)?;
    }
    w.flush()?;
    write_json(&paths[1], report)?;
    let layers = [
        Layer {
            label: "simulation mean",
            rows: sim,
            dashed: false,
        },
        Layer {
            label: "fluid limit",
            rows: ode,
            dashed: true,
        },
    ];
    emit_chart(&layers, &ChartSpec::default(), &paths[2])?;
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::{simulate, SimulateConfig};

    #[test]
    fn simulation_outputs_are_reproducible() {
        let cfg = SimulateConfig::new(200, 3, 11);
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let pa = write_simulation(a.path(), &simulate(&cfg).unwrap()).unwrap();
        let pb = write_simulation(b.path(), &simulate(&cfg).unwrap()).unwrap();
        assert_eq!(pa.len(), 6);
        for (x, y) in pa.iter().zip(&pb) {
            assert_eq!(fs::read(x).unwrap(), fs::read(y).unwrap(), "{}", x.display());
        }
        let text = fs::read_to_string(&pa[1]).unwrap();
        assert!(text.starts_with("tau,p,v1,v2,s1,s2,s3\n"));
    }
}
