//! Exact list distributions by walking each method's sampling tree.
//!
//! The walks are written from the method definitions directly and do not call
//! the constructors they are used to check.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::baselines::pm::rank_weight;
use crate::error::{Error, Result};
use crate::method::Method;
use crate::scalar::Scalar;
use crate::types::{DocumentId, MultileavedList, RankerSet, TeamAssignment};

pub const MAX_DOCS: usize = 7;
pub const MAX_RANKERS: usize = 4;

/// Exact probability of every reachable (list, payload) outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct ListDistribution {
    pub lists: BTreeMap<MultileavedList, BigRational>,
}

impl ListDistribution {
    pub fn probability(&self, displayed: &[DocumentId]) -> BigRational {
        self.lists
            .iter()
            .filter(|(m, _)| m.displayed == displayed)
            .map(|(_, p)| p.clone())
            .sum()
    }

    /// Distribution over displayed sequences, summing out the payload.
    pub fn displayed(&self) -> BTreeMap<Vec<DocumentId>, BigRational> {
        let mut out: BTreeMap<Vec<DocumentId>, BigRational> = BTreeMap::new();
        for (m, p) in &self.lists {
            *out.entry(m.displayed.clone()).or_insert_with(BigRational::zero) += p.clone();
        }
        out
    }

    pub fn total(&self) -> BigRational {
        self.lists.values().cloned().sum()
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    fn add(&mut self, m: MultileavedList, p: BigRational) {
        *self.lists.entry(m).or_insert_with(BigRational::zero) += p;
    }
}

pub(crate) fn check_tractable(rankers: &RankerSet, k: usize) -> Result<()> {
    if rankers.num_docs() > MAX_DOCS || rankers.num_rankers() > MAX_RANKERS {
        return Err(Error::InstanceTooLarge(format!(
            "{} documents and {} rankers (limits {MAX_DOCS} and {MAX_RANKERS})",
            rankers.num_docs(),
            rankers.num_rankers()
        )));
    }
    if k > rankers.num_docs() {
        return Err(Error::ListTooLong {
            k,
            docs: rankers.num_docs(),
        });
    }
    Ok(())
}

fn ratio(num: usize, den: usize) -> BigRational {
    BigRational::from_ratio(num as u64, den as u64)
}

pub fn enumerate_lists(method: &Method, rankers: &RankerSet, k: usize) -> Result<ListDistribution> {
    check_tractable(rankers, k)?;
    let mut dist = ListDistribution { lists: BTreeMap::new() };
    match method {
        Method::Ppm => walk_ppm(rankers, k, &mut Vec::new(), BigRational::one(), &mut dist),
        Method::Tdm | Method::Sosm { .. } => walk_team_draft(
            rankers,
            k,
            &mut Vec::new(),
            &mut Vec::new(),
            Vec::new(),
            BigRational::one(),
            &mut dist,
        ),
        Method::Pm(cfg) => walk_pm(rankers, k, cfg.tau, &mut Vec::new(), BigRational::one(), &mut dist),
    }
    Ok(dist)
}

fn walk_ppm(rankers: &RankerSet, k: usize, prefix: &mut Vec<DocumentId>, p: BigRational, out: &mut ListDistribution) {
    if prefix.len() == k {
        out.add(MultileavedList::new(prefix.clone()), p);
        return;
    }
    let rank = prefix.len() + 1;
    let candidates: Vec<DocumentId> = rankers
        .documents()
        .iter()
        .copied()
        .filter(|d| !prefix.contains(d))
        .filter(|&d| rankers.rankings().iter().any(|l| l.docs()[..rank].contains(&d)))
        .collect();
    let step = ratio(1, candidates.len());
    for d in candidates {
        prefix.push(d);
        walk_ppm(rankers, k, prefix, p.clone() * step.clone(), out);
        prefix.pop();
    }
}

fn walk_team_draft(
    rankers: &RankerSet,
    k: usize,
    prefix: &mut Vec<DocumentId>,
    teams: &mut Vec<usize>,
    round_left: Vec<usize>,
    p: BigRational,
    out: &mut ListDistribution,
) {
    if prefix.len() == k {
        out.add(
            MultileavedList::with_teams(prefix.clone(), TeamAssignment(teams.clone())),
            p,
        );
        return;
    }
    let round_left = if round_left.is_empty() {
        (0..rankers.num_rankers()).collect()
    } else {
        round_left
    };
    let step = ratio(1, round_left.len());
    for &r in &round_left {
        let d = *rankers
            .ranking(r)
            .docs()
            .iter()
            .find(|d| !prefix.contains(d))
            .expect("k <= |D|");
        let rest: Vec<usize> = round_left.iter().copied().filter(|&x| x != r).collect();
        prefix.push(d);
        teams.push(r);
        walk_team_draft(rankers, k, prefix, teams, rest, p.clone() * step.clone(), out);
        prefix.pop();
        teams.pop();
    }
}

fn walk_pm(
    rankers: &RankerSet,
    k: usize,
    tau: f64,
    prefix: &mut Vec<DocumentId>,
    p: BigRational,
    out: &mut ListDistribution,
) {
    if prefix.len() == k {
        out.add(MultileavedList::new(prefix.clone()), p);
        return;
    }
    let pick_ranker = ratio(1, rankers.num_rankers());
    let mut next: BTreeMap<DocumentId, BigRational> = BTreeMap::new();
    for l in rankers.rankings() {
        let weights: Vec<(DocumentId, BigRational)> = l
            .docs()
            .iter()
            .enumerate()
            .filter(|(_, d)| !prefix.contains(d))
            .map(|(i, &d)| (d, BigRational::from_f64(rank_weight(i + 1, tau))))
            .collect();
        let total: BigRational = weights.iter().map(|(_, w)| w.clone()).sum();
        for (d, w) in weights {
            *next.entry(d).or_insert_with(BigRational::zero) += pick_ranker.clone() * w / total.clone();
        }
    }
    for (d, q) in next {
        prefix.push(d);
        walk_pm(rankers, k, tau, prefix, p.clone() * q, out);
        prefix.pop();
    }
}
