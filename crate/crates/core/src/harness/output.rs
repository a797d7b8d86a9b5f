//! Result files: one CSV row per recorded point, plus a JSON summary.

use std::fs::{self, File};
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::run::{CurvePoint, ErrorCurve};
use crate::data::GroundTruth;
use crate::error::{Error, Result};

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub method: String,
    pub run: usize,
    pub impression: usize,
    pub e_bin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: String,
    pub runs: usize,
    pub mean_final_e_bin: f64,
    /// Sample standard deviation; 0 for a single run.
    pub std_final_e_bin: f64,
    pub mean_curve: Vec<CurvePoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub config: ExperimentConfig,
    pub ground_truth_ndcg: Vec<f64>,
    pub run_seeds: Vec<u64>,
    pub methods: Vec<MethodSummary>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputFiles {
    pub csv: PathBuf,
    pub summary: PathBuf,
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Per-method statistics in order of first appearance.
pub fn summarize(config: &ExperimentConfig, truth: &GroundTruth, curves: &[ErrorCurve]) -> Summary {
    let mut names: Vec<&str> = Vec::new();
    for c in curves {
        if !names.contains(&c.method.as_str()) {
            names.push(&c.method);
        }
    }
    let methods = names
        .into_iter()
        .map(|name| {
            let runs: Vec<&ErrorCurve> = curves.iter().filter(|c| c.method == name).collect();
            let finals: Vec<f64> = runs.iter().map(|c| c.final_error()).collect();
            let (mean, std) = mean_std(&finals);
            let mean_curve = runs[0]
                .points
                .iter()
                .enumerate()
                .map(|(i, p)| CurvePoint {
                    impression: p.impression,
                    e_bin: runs.iter().map(|c| c.points[i].e_bin).sum::<f64>() / runs.len() as f64,
                })
                .collect();
            MethodSummary {
                method: name.to_string(),
                runs: runs.len(),
                mean_final_e_bin: mean,
                std_final_e_bin: std,
                mean_curve,
            }
        })
        .collect();
    let run_seeds = (0..config.runs).map(|r| super::run_seed(config.seed, r)).collect();
    Summary {
        config: config.clone(),
        ground_truth_ndcg: truth.ndcg.clone(),
        run_seeds,
        methods,
    }
}

/// Writes columns `method,run,impression,e_bin`.
pub fn write_curves_csv<W: Write>(curves: &[ErrorCurve], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    for c in curves {
        for p in &c.points {
            w.serialize(CurveRecord {
                method: c.method.clone(),
                run: c.run,
                impression: p.impression,
                e_bin: p.e_bin,
            })?;
        }
    }
    w.flush().map_err(|e| Error::io("<csv output>", e))?;
    Ok(())
}

pub fn read_curves_csv<R: Read>(source: R) -> Result<Vec<CurveRecord>> {
    csv::Reader::from_reader(source)
        .deserialize()
        .map(|r| r.map_err(Error::from))
        .collect()
}

/// Writes `results.csv` and `summary.json` into `dir`, creating it if needed.
pub fn emit_results(
    config: &ExperimentConfig,
    truth: &GroundTruth,
    curves: &[ErrorCurve],
    dir: impl AsRef<Path>,
) -> Result<OutputFiles> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let files = OutputFiles {
        csv: dir.join("results.csv"),
        summary: dir.join("summary.json"),
    };
    let csv_file = File::create(&files.csv).map_err(|e| Error::io(&files.csv, e))?;
    write_curves_csv(curves, BufWriter::new(csv_file))?;
    let mut json = serde_json::to_string_pretty(&summarize(config, truth, curves))?;
    json.push('\n');
    fs::write(&files.summary, json).map_err(|e| Error::io(&files.summary, e))?;
    Ok(files)
}
