//! Brute-force verification on small instances.
//!
//! Everything here is exact: list distributions are enumerated from each
//! method's sampling tree and expectations are taken in rational arithmetic,
//! so "zero in expectation" means exactly zero.

mod clicks;
mod enumerate;
pub mod instances;
mod report;

pub use clicks::{ClickSpec, CorrelatedClickSpec, UncorrelatedClickSpec};
pub use enumerate::{enumerate_lists, ListDistribution, MAX_DOCS, MAX_RANKERS};
pub use report::{verify_property, Property, PropertyReport};

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::Result;
use crate::method::{Method, QueryContext};
use crate::types::{DocumentId, MultileavedList, PreferenceMatrix, RankerSet};

/// Exact `E[P]` over lists of length `k` and click patterns.
pub fn expected_preference_matrix(
    method: &Method,
    rankers: &RankerSet,
    clicks: ClickSpec<'_>,
    k: usize,
) -> Result<PreferenceMatrix<BigRational>> {
    let lists = enumerate_lists(method, rankers, k)?;
    let ctx = QueryContext::new(rankers.clone());
    let mut expected = PreferenceMatrix::zeros(rankers.num_rankers());
    for (m, p_list) in &lists.lists {
        for (c, p_click) in clicks.distribution(m)? {
            if !c.any() {
                continue;
            }
            let mut delta = method.infer_exact::<BigRational>(&ctx, m, &c)?;
            delta.scale(&(p_list.clone() * p_click));
            expected.merge(&delta)?;
        }
    }
    Ok(expected)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Considerateness {
    Holds { lists_checked: usize },
    Counterexample(MultileavedList),
}

impl Considerateness {
    pub fn holds(&self) -> bool {
        matches!(self, Considerateness::Holds { .. })
    }
}

/// Checks every list in the method's support against the considerateness
/// constraint and returns the first violation.
pub fn check_considerateness(method: &Method, rankers: &RankerSet, k: usize) -> Result<Considerateness> {
    let lists = enumerate_lists(method, rankers, k)?;
    for m in lists.lists.keys() {
        if !m.is_considerate(rankers) {
            return Ok(Considerateness::Counterexample(m.clone()));
        }
    }
    Ok(Considerateness::Holds {
        lists_checked: lists.len(),
    })
}

/// Relevant documents that at least one ranker places above `cutoff`.
pub fn relevant_above_cutoff(
    rankers: &RankerSet,
    relevant: &BTreeSet<DocumentId>,
    cutoff: usize,
) -> BTreeSet<DocumentId> {
    relevant
        .iter()
        .copied()
        .filter(|&d| rankers.best_rank(d).is_some_and(|r| r < cutoff))
        .collect()
}

/// `true` if ranker `a` places every counted relevant document at least as
/// high as ranker `b`, and at least one strictly higher.
pub fn pareto_dominates(
    rankers: &RankerSet,
    a: usize,
    b: usize,
    relevant: &BTreeSet<DocumentId>,
    cutoff: usize,
) -> bool {
    let counted = relevant_above_cutoff(rankers, relevant, cutoff);
    let (la, lb) = (rankers.ranking(a), rankers.ranking(b));
    let ranks = |d: DocumentId| (la.rank(d).unwrap_or(usize::MAX), lb.rank(d).unwrap_or(usize::MAX));
    counted.iter().all(|&d| ranks(d).0 <= ranks(d).1) && counted.iter().any(|&d| ranks(d).0 < ranks(d).1)
}

/// The ranker that Pareto dominates every other ranker, if any.
pub fn pareto_dominator(rankers: &RankerSet, relevant: &BTreeSet<DocumentId>, cutoff: usize) -> Option<usize> {
    let n = rankers.num_rankers();
    (0..n).find(|&a| {
        (0..n)
            .filter(|&b| b != a)
            .all(|b| pareto_dominates(rankers, a, b, relevant, cutoff))
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParetoFidelity {
    Holds { dominator: usize, row: Vec<BigRational> },
    Violated { dominator: usize, row: Vec<BigRational> },
    NotApplicable,
}

impl ParetoFidelity {
    pub fn holds(&self) -> bool {
        matches!(self, ParetoFidelity::Holds { .. })
    }
}

/// Checks that a Pareto-dominating ranker wins against every other ranker in
/// expectation under correlated clicks. The full ranking is displayed.
pub fn check_pareto_fidelity(
    method: &Method,
    rankers: &RankerSet,
    relevant: &BTreeSet<DocumentId>,
    spec: &CorrelatedClickSpec,
) -> Result<ParetoFidelity> {
    let Some(dominator) = pareto_dominator(rankers, relevant, spec.cutoff) else {
        return Ok(ParetoFidelity::NotApplicable);
    };
    let expected = expected_preference_matrix(
        method,
        rankers,
        ClickSpec::Correlated { spec, relevant },
        rankers.num_docs(),
    )?;
    let row: Vec<BigRational> = (0..rankers.num_rankers())
        .filter(|&m| m != dominator)
        .map(|m| expected.get(dominator, m).clone())
        .collect();
    let positive = row.iter().all(|v| v > &BigRational::zero());
    Ok(if positive {
        ParetoFidelity::Holds { dominator, row }
    } else {
        ParetoFidelity::Violated { dominator, row }
    })
}

/// Exact expectation under position-biased clicks, which must be the zero
/// matrix for a method with fidelity.
pub fn check_uncorrelated_fidelity(
    method: &Method,
    rankers: &RankerSet,
    spec: &UncorrelatedClickSpec,
    k: usize,
) -> Result<(bool, PreferenceMatrix<BigRational>)> {
    let expected = expected_preference_matrix(method, rankers, ClickSpec::Uncorrelated(spec), k)?;
    Ok((expected.is_zero(), expected))
}
