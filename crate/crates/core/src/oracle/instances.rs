//! Instance families used to exercise the oracle.
//!
//! - [`random_instance`]: independent uniformly random rankings.
//! - [`pareto_instance`]: a random first ranker plus rankers derived from it by
//!   demoting relevant documents and shuffling non-relevant ones, kept only if
//!   the first ranker Pareto dominates all of them.
//! - [`position_bias_specs`]: decreasing per-rank click probabilities.

use std::collections::BTreeSet;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use super::{pareto_dominator, CorrelatedClickSpec, UncorrelatedClickSpec};
use crate::types::{DocumentId, RankerSet, Ranking};

fn shuffled<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<DocumentId> {
    let mut v: Vec<DocumentId> = (0..n as u32).map(DocumentId).collect();
    v.shuffle(rng);
    v
}

/// `n_rankers` independent random rankings of `n_docs` documents.
pub fn random_instance<R: Rng + ?Sized>(n_docs: usize, n_rankers: usize, rng: &mut R) -> RankerSet {
    RankerSet::new(
        (0..n_rankers)
            .map(|_| Ranking::new(shuffled(n_docs, rng)).expect("permutation"))
            .collect(),
    )
    .expect("same documents")
}

/// A ranker set where ranker 0 Pareto dominates every other ranker, together
/// with the relevant documents and the click cutoff.
#[derive(Debug, Clone)]
pub struct ParetoInstance {
    pub rankers: RankerSet,
    pub relevant: BTreeSet<DocumentId>,
    pub cutoff: usize,
}

pub fn pareto_instance<R: Rng + ?Sized>(n_docs: usize, n_rankers: usize, rng: &mut R) -> ParetoInstance {
    assert!(n_docs >= 2 && n_rankers >= 2);
    loop {
        let base = shuffled(n_docs, rng);
        let n_relevant = rng.random_range(1..n_docs);
        let relevant: BTreeSet<DocumentId> = base.choose_multiple(rng, n_relevant).copied().collect();
        let cutoff = rng.random_range(2..=n_docs);
        let mut lists = vec![base.clone()];
        for _ in 1..n_rankers {
            let mut l = base.clone();
            for _ in 0..rng.random_range(1..=2 * n_docs) {
                let i = rng.random_range(0..n_docs - 1);
                let (upper, lower) = (relevant.contains(&l[i]), relevant.contains(&l[i + 1]));
                // demote a relevant document or reorder two non-relevant ones
                if (upper && !lower) || (!upper && !lower) {
                    l.swap(i, i + 1);
                }
            }
            lists.push(l);
        }
        let rankers = RankerSet::new(
            lists
                .into_iter()
                .map(|l| Ranking::new(l).expect("permutation"))
                .collect(),
        )
        .expect("same documents");
        if pareto_dominator(&rankers, &relevant, cutoff) == Some(0) {
            return ParetoInstance {
                rankers,
                relevant,
                cutoff,
            };
        }
    }
}

/// Position-biased specs: steeply falling, gently falling, and flat-then-drop.
pub fn position_bias_specs(k: usize) -> Vec<UncorrelatedClickSpec> {
    let steep = (0..k).map(|i| 0.9 / (i + 1) as f64).collect();
    let gentle = (0..k).map(|i| 0.6 - 0.1 * i as f64).map(|p: f64| p.max(0.05)).collect();
    let step = (0..k).map(|i| if i < 2 { 0.5 } else { 0.125 }).collect();
    [steep, gentle, step]
        .into_iter()
        .map(|p| UncorrelatedClickSpec::new(p).expect("valid probabilities"))
        .collect()
}

/// A correlated spec that clicks relevant documents with probability
/// decreasing from 0.9 and non-relevant ones from 0.3.
pub fn correlated_spec(cutoff: usize) -> CorrelatedClickSpec {
    let n = cutoff - 1;
    let rel = (0..n).map(|i| 0.9 - 0.1 * i as f64).collect();
    let non = (0..n).map(|i| 0.3 - 0.05 * i as f64).map(|p: f64| p.max(0.0)).collect();
    CorrelatedClickSpec::new(cutoff, rel, non).expect("valid correlated spec")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pareto_instances_have_ranker_zero_dominating() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..20 {
            let inst = pareto_instance(5, 3, &mut rng);
            assert_eq!(pareto_dominator(&inst.rankers, &inst.relevant, inst.cutoff), Some(0));
        }
    }

    #[test]
    fn specs_are_valid() {
        assert_eq!(position_bias_specs(6).len(), 3);
        for k in 2..8 {
            let s = correlated_spec(k);
            assert_eq!(s.p_relevant.len(), k - 1);
        }
    }
}
