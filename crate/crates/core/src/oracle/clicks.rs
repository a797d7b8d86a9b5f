//! Click behaviour specifications for exact expectations.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::clicksim::{click_distribution, ClickModel, MAX_ENUMERATED_CLICKS};
use crate::data::QueryData;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::types::{ClickVector, DocumentId, MultileavedList};

/// Clicks that depend only on the display rank (position bias), never on the
/// document shown there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UncorrelatedClickSpec {
    /// Click probability per rank, starting at rank 1. Ranks past the end are
    /// never clicked.
    pub p_click: Vec<f64>,
}

impl UncorrelatedClickSpec {
    pub fn new(p_click: Vec<f64>) -> Result<Self> {
        check_probabilities(&p_click)?;
        Ok(UncorrelatedClickSpec { p_click })
    }

    fn at(&self, rank: usize) -> f64 {
        self.p_click.get(rank - 1).copied().unwrap_or(0.0)
    }
}

/// Clicks that favour relevant documents above a cutoff rank.
///
/// Ranks `1..cutoff` are clickable, with `p_relevant[i] > p_nonrelevant[i]`;
/// ranks at or below `cutoff` are never clicked.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelatedClickSpec {
    pub cutoff: usize,
    pub p_relevant: Vec<f64>,
    pub p_nonrelevant: Vec<f64>,
}

impl CorrelatedClickSpec {
    pub fn new(cutoff: usize, p_relevant: Vec<f64>, p_nonrelevant: Vec<f64>) -> Result<Self> {
        if cutoff < 2 {
            return Err(Error::Config("correlated clicks need a cutoff of at least 2".into()));
        }
        if p_relevant.len() != cutoff - 1 || p_nonrelevant.len() != cutoff - 1 {
            return Err(Error::Config(format!(
                "expected {} click probabilities per relevance class",
                cutoff - 1
            )));
        }
        check_probabilities(&p_relevant)?;
        check_probabilities(&p_nonrelevant)?;
        if p_relevant.iter().zip(&p_nonrelevant).any(|(r, n)| r <= n) {
            return Err(Error::Config(
                "relevant documents must be strictly more likely to be clicked at every rank".into(),
            ));
        }
        Ok(CorrelatedClickSpec {
            cutoff,
            p_relevant,
            p_nonrelevant,
        })
    }

    fn at(&self, rank: usize, relevant: bool) -> f64 {
        if rank >= self.cutoff {
            return 0.0;
        }
        if relevant {
            self.p_relevant[rank - 1]
        } else {
            self.p_nonrelevant[rank - 1]
        }
    }
}

fn check_probabilities(p: &[f64]) -> Result<()> {
    if p.iter().any(|x| !(0.0..=1.0).contains(x)) {
        return Err(Error::Config("click probabilities must lie in [0, 1]".into()));
    }
    Ok(())
}

/// What the oracle takes expectations over.
#[derive(Debug, Clone, Copy)]
pub enum ClickSpec<'a> {
    Uncorrelated(&'a UncorrelatedClickSpec),
    Correlated {
        spec: &'a CorrelatedClickSpec,
        relevant: &'a BTreeSet<DocumentId>,
    },
    Cascade {
        model: &'a ClickModel,
        query: &'a QueryData,
    },
}

impl ClickSpec<'_> {
    /// Exact distribution over click patterns on `m`, zero-probability
    /// patterns omitted.
    pub fn distribution(&self, m: &MultileavedList) -> Result<BTreeMap<ClickVector, BigRational>> {
        let per_rank: Vec<f64> = match self {
            ClickSpec::Cascade { model, query } => {
                let mut d = click_distribution::<BigRational>(model, m, query)?;
                d.retain(|_, p| !p.is_zero());
                return Ok(d);
            }
            ClickSpec::Uncorrelated(spec) => (1..=m.len()).map(|r| spec.at(r)).collect(),
            ClickSpec::Correlated { spec, relevant } => m
                .displayed
                .iter()
                .enumerate()
                .map(|(i, d)| spec.at(i + 1, relevant.contains(d)))
                .collect(),
        };
        independent_clicks(&per_rank)
    }
}

fn independent_clicks(per_rank: &[f64]) -> Result<BTreeMap<ClickVector, BigRational>> {
    let k = per_rank.len();
    if k > MAX_ENUMERATED_CLICKS {
        return Err(Error::TooManyClicks {
            k,
            limit: MAX_ENUMERATED_CLICKS,
        });
    }
    let p: Vec<BigRational> = per_rank.iter().map(|&x| BigRational::from_f64(x)).collect();
    let mut out = BTreeMap::new();
    for bits in 0..1u32 << k {
        let mut prob = BigRational::one();
        for (i, pi) in p.iter().enumerate() {
            prob *= if bits >> i & 1 == 1 {
                pi.clone()
            } else {
                BigRational::one() - pi.clone()
            };
            if prob.is_zero() {
                break;
            }
        }
        if !prob.is_zero() {
            out.insert(ClickVector::from_bits(k, bits), prob);
        }
    }
    Ok(out)
}
