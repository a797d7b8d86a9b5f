//! Sample Only Scored Multileaving.
//!
//! Lists are built exactly like Team Draft Multileaving. Inference ignores
//! every document that was not displayed: each ranker is scored on how it
//! orders the displayed documents, and the per-impression outcome is binary.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::tdm::{binary_preferences, construct_tdm};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::types::{ClickVector, MultileavedList, PreferenceMatrix, RankerSet};

/// How a clicked document at a restricted rank is credited.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SosmCredit {
    /// `1 / rank`
    #[default]
    InverseRank,
    /// `1 / log2(rank + 1)`
    LogDiscount,
}

impl SosmCredit {
    pub fn credit(self, restricted_rank: usize) -> f64 {
        match self {
            SosmCredit::InverseRank => 1.0 / restricted_rank as f64,
            SosmCredit::LogDiscount => 1.0 / ((restricted_rank + 1) as f64).log2(),
        }
    }
}

pub fn construct_sosm<R: Rng + ?Sized>(rankers: &RankerSet, k: usize, rng: &mut R) -> Result<MultileavedList> {
    construct_tdm(rankers, k, rng)
}

/// Rank of each displayed document within ranker `n`'s ordering of only the
/// displayed documents.
fn restricted_ranks(rankers: &RankerSet, n: usize, m: &MultileavedList) -> Result<Vec<usize>> {
    let l = rankers.ranking(n);
    let full: Vec<usize> = m
        .displayed
        .iter()
        .map(|&d| l.rank(d).ok_or(crate::error::Error::DocumentNotFound(d)))
        .collect::<Result<_>>()?;
    Ok(full
        .iter()
        .map(|&r| 1 + full.iter().filter(|&&other| other < r).count())
        .collect())
}

pub fn infer_sosm<S: Scalar>(
    rankers: &RankerSet,
    m: &MultileavedList,
    c: &ClickVector,
    credit: SosmCredit,
) -> Result<PreferenceMatrix<S>> {
    if m.len() != c.len() {
        return Err(Error::DimensionMismatch {
            expected: m.len(),
            actual: c.len(),
        });
    }
    let n_rankers = rankers.num_rankers();
    if !c.any() {
        return Ok(PreferenceMatrix::zeros(n_rankers));
    }
    let scores = (0..n_rankers)
        .map(|n| {
            let ranks = restricted_ranks(rankers, n, m)?;
            Ok(ranks
                .iter()
                .zip(&c.0)
                .filter(|(_, &clicked)| clicked)
                .map(|(&r, _)| credit.credit(r))
                .sum::<f64>())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(binary_preferences(&scores))
}
