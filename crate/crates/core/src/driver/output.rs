//! CSV outputs: fronts for plotting and the per-run summary table.

use std::fs::File;
use std::path::{Path, PathBuf};

use super::RunRecord;
use crate::error::{Error, Result};
use crate::problems::sample_true_pf;

fn objective_header(m: usize) -> Vec<String> {
    (1..=m).map(|j| format!("f{j}")).collect()
}

fn write_points(path: &Path, points: &[Vec<f64>], m: usize) -> Result<()> {
    let mut w = csv::Writer::from_writer(File::create(path)?);
    w.write_record(objective_header(m))?;
    for p in points {
        w.write_record(p.iter().map(f64::to_string))?;
    }
    w.flush()?;
    Ok(())
}

/// Path of the true-front companion file written by [`emit_front`].
pub fn true_front_path(path: &Path) -> PathBuf {
    path.with_extension("pf.csv")
}

/// Writes the record's final front to `path` (one column per objective)
/// and a sample of the true front to `<path stem>.pf.csv`.
pub fn emit_front(record: &RunRecord, path: &Path) -> Result<PathBuf> {
    let m = record.config.m;
    let front: Vec<Vec<f64>> = record.front.iter().map(|s| s.f.0.clone()).collect();
    write_points(path, &front, m)?;
    let spec = record.config.problem_spec()?;
    let pf_path = true_front_path(path);
    write_points(&pf_path, &sample_true_pf(&spec, record.config.pf_samples), m)?;
    Ok(pf_path)
}

/// Reads an objective CSV with a header row; every row must have the same
/// number of columns.
pub fn read_front_csv(path: &Path) -> Result<Vec<Vec<f64>>> {
    let mut r = csv::Reader::from_reader(File::open(path)?);
    let mut points = Vec::new();
    for (i, row) in r.records().enumerate() {
        let row = row?;
        let p = row
            .iter()
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidInput(format!("{}: row {}: '{v}' is not a number", path.display(), i + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        points.push(p);
    }
    Ok(points)
}

pub fn summary_header() -> Vec<&'static str> {
    vec![
        "problem",
        "n",
        "m",
        "instance",
        "seed",
        "status",
        "initial_hv",
        "final_hv",
        "true_fes",
        "segments_covered",
        "segments_total",
    ]
}

/// Summary fields of a completed run. Wall time is left out so that
/// repeated runs give identical rows.
pub fn summary_row(record: &RunRecord) -> Vec<String> {
    let c = &record.config;
    vec![
        c.problem.clone(),
        c.n.to_string(),
        c.m.to_string(),
        record.instance.clone(),
        c.seed.to_string(),
        "ok".into(),
        record.initial_hv.to_string(),
        record.final_hv.to_string(),
        record.true_fes.to_string(),
        record.coverage.covered.to_string(),
        record.coverage.total.to_string(),
    ]
}

/// Writes `rows` under [`summary_header`].
pub fn write_summary(path: &Path, rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(File::create(path)?);
    w.write_record(summary_header())?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}
