//! The simulation loop: sample a query, multileave, simulate clicks, infer,
//! accumulate, and track the binary error against the ground truth.

mod config;
mod output;
mod run;

pub use config::{log_schedule, ClickModelChoice, DatasetSource, ExperimentConfig, RankerChoice};
pub use output::{
    emit_results, read_curves_csv, summarize, write_curves_csv, CurveRecord, MethodSummary, OutputFiles, Summary,
};
pub use run::{impression_seed, run_experiment, run_seed, CurvePoint, ErrorCurve, Experiment};

use crate::data::GroundTruth;
use crate::error::{Error, Result};
use crate::scalar::{sign, Scalar};
use crate::types::PreferenceMatrix;

/// Fraction of ordered ranker pairs whose estimated preference sign differs
/// from the ground truth.
///
/// Pairs the ground truth ties are left out entirely. An estimate of zero
/// against a non-tied truth counts as an error. If every pair is tied the
/// error is 0.
pub fn binary_error<S: Scalar>(estimate: &PreferenceMatrix<S>, truth: &GroundTruth) -> Result<f64> {
    let n = truth.num_rankers();
    if estimate.size() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: estimate.size(),
        });
    }
    let mut considered = 0usize;
    let mut wrong = 0usize;
    for a in 0..n {
        for b in 0..n {
            if a == b || truth.is_tie(a, b) {
                continue;
            }
            considered += 1;
            if sign(estimate.get(a, b)) != truth.signs[a][b] {
                wrong += 1;
            }
        }
    }
    Ok(if considered == 0 {
        0.0
    } else {
        wrong as f64 / considered as f64
    })
}
