//! Probabilistic Multileaving.
//!
//! Every ranker is a distribution over documents with `p(d) ∝ rank(d)^-τ`,
//! renormalised over the documents not yet shown. Each rank of the list is
//! filled by picking a ranker uniformly and sampling from its distribution.
//! Inference credits each ranker with the expected number of clicked
//! documents it contributed, given the observed list.
//!
//! Given the list, the ranker behind each rank is independent of the other
//! ranks: the posterior for rank `t` is proportional to the probability each
//! ranker had of emitting the document shown at `t` from the documents left
//! at that point.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_distr::Binomial;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::types::{ClickVector, DocumentId, MultileavedList, PreferenceMatrix, RankerSet};

/// Inference switches from exact marginalisation to sampling above this
/// number of assignment sequences (`|R|^k`).
pub const EXACT_ASSIGNMENT_LIMIT: u128 = 4096;

fn default_tau() -> f64 {
    3.0
}

fn default_eta() -> usize {
    10_000
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PmConfig {
    /// Softmax degree.
    #[serde(default = "default_tau")]
    pub tau: f64,
    /// Number of sampled assignment sequences per impression.
    #[serde(default = "default_eta")]
    pub eta: usize,
}

impl Default for PmConfig {
    fn default() -> Self {
        PmConfig {
            tau: default_tau(),
            eta: default_eta(),
        }
    }
}

impl PmConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::Config(format!("pm tau must be positive, got {}", self.tau)));
        }
        if self.eta == 0 {
            return Err(Error::Config("pm eta must be at least 1".into()));
        }
        Ok(())
    }
}

/// Unnormalised softmax weight of a document at `rank`.
pub fn rank_weight(rank: usize, tau: f64) -> f64 {
    (rank as f64).powf(-tau)
}

pub fn construct_pm<R: Rng + ?Sized>(rankers: &RankerSet, k: usize, tau: f64, rng: &mut R) -> Result<MultileavedList> {
    let n_docs = rankers.num_docs();
    if k > n_docs {
        return Err(Error::ListTooLong { k, docs: n_docs });
    }
    let mut displayed: Vec<DocumentId> = Vec::with_capacity(k);
    // per ranker, documents in rank order with their weights; placed ones are zeroed
    let mut weights: Vec<Vec<f64>> = rankers
        .rankings()
        .iter()
        .map(|l| (1..=l.len()).map(|r| rank_weight(r, tau)).collect())
        .collect();
    for _ in 0..k {
        let r = rng.random_range(0..rankers.num_rankers());
        let dist = WeightedIndex::new(&weights[r]).expect("unplaced documents remain");
        let d = rankers.ranking(r).docs()[dist.sample(rng)];
        displayed.push(d);
        for (l, w) in rankers.rankings().iter().zip(weights.iter_mut()) {
            w[l.rank(d).expect("shared documents") - 1] = 0.0;
        }
    }
    Ok(MultileavedList::new(displayed))
}

/// Posterior over which ranker contributed each displayed document.
///
/// `posterior[t][r]` is the probability that ranker `r` placed rank `t + 1`.
pub fn assignment_posterior<S: Scalar>(rankers: &RankerSet, m: &MultileavedList, tau: f64) -> Result<Vec<Vec<S>>> {
    let n_rankers = rankers.num_rankers();
    // every ranker's weights over the full set sum to the same value
    let full: S = (1..=rankers.num_docs())
        .map(|r| S::from_f64(rank_weight(r, tau)))
        .fold(S::zero(), |a, b| a + b);
    let mut remaining = vec![full; n_rankers];
    let mut out = Vec::with_capacity(m.len());
    for &d in &m.displayed {
        let emit: Vec<S> = rankers
            .rankings()
            .iter()
            .zip(&remaining)
            .map(|(l, total)| {
                let rank = l.rank(d).ok_or(Error::DocumentNotFound(d))?;
                Ok(S::from_f64(rank_weight(rank, tau)) / total.clone())
            })
            .collect::<Result<_>>()?;
        let norm = emit.iter().cloned().fold(S::zero(), |a, b| a + b);
        out.push(emit.into_iter().map(|p| p / norm.clone()).collect());
        for (l, total) in rankers.rankings().iter().zip(remaining.iter_mut()) {
            *total -= S::from_f64(rank_weight(l.rank(d).expect("checked above"), tau));
        }
    }
    Ok(out)
}

fn credit_matrix<S: Scalar>(expected: &[S]) -> PreferenceMatrix<S> {
    let n = expected.len();
    let mut p = PreferenceMatrix::zeros(n);
    for a in 0..n {
        for b in 0..n {
            if a != b {
                p.set(a, b, expected[a].clone() - expected[b].clone());
            }
        }
    }
    p
}

/// Exact expected click credit differences.
pub fn infer_pm_exact<S: Scalar>(
    rankers: &RankerSet,
    m: &MultileavedList,
    c: &ClickVector,
    tau: f64,
) -> Result<PreferenceMatrix<S>> {
    check_lengths(m, c)?;
    let mut expected = vec![S::zero(); rankers.num_rankers()];
    if c.any() {
        let posterior = assignment_posterior::<S>(rankers, m, tau)?;
        for (row, _) in posterior.iter().zip(&c.0).filter(|(_, &clicked)| clicked) {
            for (e, p) in expected.iter_mut().zip(row) {
                *e += p.clone();
            }
        }
    }
    Ok(credit_matrix(&expected))
}

/// Monte-Carlo estimate from `eta` sampled assignment sequences.
///
/// Only the clicked ranks influence the credit, and ranks are independent
/// given the list, so the `eta` draws at each clicked rank are taken at once
/// as a multinomial count vector.
pub fn infer_pm_sampled<R: Rng + ?Sized>(
    rankers: &RankerSet,
    m: &MultileavedList,
    c: &ClickVector,
    config: &PmConfig,
    rng: &mut R,
) -> Result<PreferenceMatrix<f64>> {
    check_lengths(m, c)?;
    let n_rankers = rankers.num_rankers();
    let mut counts = vec![0u64; n_rankers];
    if c.any() {
        let posterior = assignment_posterior::<f64>(rankers, m, config.tau)?;
        for (row, _) in posterior.iter().zip(&c.0).filter(|(_, &clicked)| clicked) {
            for (total, n) in counts.iter_mut().zip(multinomial(config.eta as u64, row, rng)) {
                *total += n;
            }
        }
    }
    let expected: Vec<f64> = counts.iter().map(|&n| n as f64 / config.eta as f64).collect();
    Ok(credit_matrix(&expected))
}

/// Category counts of `trials` independent draws from `probs`, drawn as a
/// chain of conditional binomials.
fn multinomial<R: Rng + ?Sized>(trials: u64, probs: &[f64], rng: &mut R) -> Vec<u64> {
    let mut out = vec![0u64; probs.len()];
    let mut left = trials;
    let mut mass: f64 = probs.iter().sum();
    for (i, &p) in probs.iter().enumerate() {
        if left == 0 {
            break;
        }
        if i + 1 == probs.len() {
            out[i] = left;
            break;
        }
        let q = if mass > 0.0 { (p / mass).clamp(0.0, 1.0) } else { 0.0 };
        let n = Binomial::new(left, q).expect("probability in [0, 1]").sample(rng);
        out[i] = n;
        left -= n;
        mass -= p;
    }
    out
}

/// Exact inference when `|R|^k` is small, sampled otherwise.
pub fn infer_pm<R: Rng + ?Sized>(
    rankers: &RankerSet,
    m: &MultileavedList,
    c: &ClickVector,
    config: &PmConfig,
    rng: &mut R,
) -> Result<PreferenceMatrix<f64>> {
    let sequences = (rankers.num_rankers() as u128).checked_pow(m.len() as u32);
    match sequences {
        Some(n) if n <= EXACT_ASSIGNMENT_LIMIT => infer_pm_exact(rankers, m, c, config.tau),
        _ => infer_pm_sampled(rankers, m, c, config, rng),
    }
}

fn check_lengths(m: &MultileavedList, c: &ClickVector) -> Result<()> {
    if m.len() != c.len() {
        return Err(Error::DimensionMismatch {
            expected: m.len(),
            actual: c.len(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_ranker_top_probability() {
        let r = RankerSet::from_ids(&[&[0, 1]]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n = 90_000;
        let top = (0..n)
            .filter(|_| construct_pm(&r, 1, 3.0, &mut rng).unwrap().displayed[0] == DocumentId(0))
            .count();
        assert!((top as f64 / n as f64 - 8.0 / 9.0).abs() < 0.005);
    }

    #[test]
    fn lists_have_no_duplicates() {
        let r = RankerSet::from_ids(&[&[0, 1, 2, 3, 4], &[4, 3, 2, 1, 0]]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let mut m = construct_pm(&r, 5, 1.0, &mut rng).unwrap().displayed;
            m.sort();
            m.dedup();
            assert_eq!(m.len(), 5);
        }
    }

    #[test]
    fn no_clicks_no_credit() {
        let r = RankerSet::from_ids(&[&[0, 1], &[1, 0]]).unwrap();
        let m = MultileavedList::new(vec![DocumentId(0), DocumentId(1)]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(infer_pm(&r, &m, &ClickVector::none(2), &PmConfig::default(), &mut rng)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn identical_rankers_share_credit() {
        let r = RankerSet::from_ids(&[&[0, 1, 2], &[0, 1, 2]]).unwrap();
        let m = MultileavedList::new(vec![DocumentId(2), DocumentId(0), DocumentId(1)]);
        let c = ClickVector::at_ranks(3, &[1, 3]);
        let exact: PreferenceMatrix<BigRational> = infer_pm_exact(&r, &m, &c, 3.0).unwrap();
        assert!(exact.is_zero());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let cfg = PmConfig { tau: 3.0, eta: 1000 };
        let sampled = infer_pm_sampled(&r, &m, &c, &cfg, &mut rng).unwrap();
        assert!(sampled.is_antisymmetric());
    }

    /// Explicit sum over all `|R|^k` assignment sequences, weighting each by
    /// its joint probability with the observed list.
    fn brute_force_expected_counts(rankers: &RankerSet, m: &MultileavedList, c: &ClickVector, tau: f64) -> Vec<f64> {
        let nr = rankers.num_rankers();
        let k = m.len();
        let mut joint_total = 0.0;
        let mut credit = vec![0.0; nr];
        for code in 0..nr.pow(k as u32) {
            let seq: Vec<usize> = (0..k).map(|t| code / nr.pow(t as u32) % nr).collect();
            let mut prob = 1.0;
            let mut shown: Vec<DocumentId> = Vec::new();
            for (t, &r) in seq.iter().enumerate() {
                let l = rankers.ranking(r);
                let total: f64 = l
                    .docs()
                    .iter()
                    .filter(|d| !shown.contains(d))
                    .map(|&d| (l.rank(d).unwrap() as f64).powf(-tau))
                    .sum();
                prob *= (1.0 / nr as f64) * (l.rank(m.displayed[t]).unwrap() as f64).powf(-tau) / total;
                shown.push(m.displayed[t]);
            }
            joint_total += prob;
            for (t, &r) in seq.iter().enumerate() {
                if c.0[t] {
                    credit[r] += prob;
                }
            }
        }
        credit.iter().map(|x| x / joint_total).collect()
    }

    #[test]
    fn exact_inference_matches_brute_force() {
        let r = RankerSet::from_ids(&[&[0, 1, 2], &[2, 0, 1], &[1, 2, 0]]).unwrap();
        let m = MultileavedList::new(vec![DocumentId(1), DocumentId(0), DocumentId(2)]);
        for bits in 0..8 {
            let c = ClickVector::from_bits(3, bits);
            let expected = brute_force_expected_counts(&r, &m, &c, 3.0);
            let p: PreferenceMatrix = infer_pm_exact(&r, &m, &c, 3.0).unwrap();
            for a in 0..3 {
                for b in 0..3 {
                    assert!((p.get(a, b) - (expected[a] - expected[b])).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn sampled_inference_approaches_exact() {
        let r = RankerSet::from_ids(&[&[0, 1], &[1, 0]]).unwrap();
        let m = MultileavedList::new(vec![DocumentId(1), DocumentId(0)]);
        let c = ClickVector::at_ranks(2, &[1]);
        let expected = brute_force_expected_counts(&r, &m, &c, 3.0);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let cfg = PmConfig {
            tau: 3.0,
            eta: 1_000_000,
        };
        let p = infer_pm_sampled(&r, &m, &c, &cfg, &mut rng).unwrap();
        assert!((p.get(0, 1) - (expected[0] - expected[1])).abs() < 0.01);
    }

    #[test]
    fn multinomial_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let probs = [0.5, 0.0, 0.3, 0.2];
        let mut totals = [0u64; 4];
        for _ in 0..200 {
            let n = multinomial(1000, &probs, &mut rng);
            assert_eq!(n.iter().sum::<u64>(), 1000);
            assert_eq!(n[1], 0);
            for (t, x) in totals.iter_mut().zip(n) {
                *t += x;
            }
        }
        for (t, p) in totals.iter().zip(probs) {
            assert!((*t as f64 / 200_000.0 - p).abs() < 0.005);
        }
    }

    #[test]
    fn config_validation() {
        assert!(PmConfig { tau: 0.0, eta: 1 }.validate().is_err());
        assert!(PmConfig { tau: 3.0, eta: 0 }.validate().is_err());
        assert!(PmConfig::default().validate().is_ok());
    }
}
