//! Pairwise Preference Multileaving.
//!
//! List construction fills rank `n` with a document drawn uniformly from the
//! choice set `Ω(n)` (every document some ranker places at rank `n` or better)
//! minus the documents already shown. Inference turns clicks into document
//! pair preferences and credits each ranker by whether it agrees with a pair,
//! weighted by the inverse probability that both documents of the pair end up
//! at or below the first rank where both could have been placed.

use std::collections::{BTreeSet, HashMap};

use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::types::{extract_click_preferences, ClickVector, DocumentId, MultileavedList, PreferenceMatrix, RankerSet};

/// Cumulative choice sets of a ranker set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChoiceSetIndex {
    first_availability: HashMap<DocumentId, usize>,
    /// `sizes[i - 1] == |Ω(i)|`.
    sizes: Vec<usize>,
    /// Documents whose first availability is `i`, at index `i - 1`, sorted by id.
    newly_available: Vec<Vec<DocumentId>>,
}

pub fn build_choice_index(rankers: &RankerSet) -> ChoiceSetIndex {
    let n_docs = rankers.num_docs();
    let mut first_availability = HashMap::with_capacity(n_docs);
    for &d in rankers.documents() {
        let best = rankers.best_rank(d).expect("document ranked by every ranker");
        first_availability.insert(d, best);
    }
    let mut newly_available = vec![Vec::new(); n_docs];
    for (&d, &rank) in &first_availability {
        newly_available[rank - 1].push(d);
    }
    for v in &mut newly_available {
        v.sort_unstable();
    }
    let sizes = newly_available
        .iter()
        .scan(0, |acc, v| {
            *acc += v.len();
            Some(*acc)
        })
        .collect();
    ChoiceSetIndex {
        first_availability,
        sizes,
        newly_available,
    }
}

impl ChoiceSetIndex {
    pub fn num_docs(&self) -> usize {
        self.sizes.len()
    }

    /// Best rank any ranker gives `d`.
    pub fn first_availability(&self, d: DocumentId) -> Option<usize> {
        self.first_availability.get(&d).copied()
    }

    /// `|Ω(i)|` for a 1-based rank; ranks past the end saturate at `|D|`.
    pub fn omega_size(&self, i: usize) -> usize {
        assert!(i >= 1, "ranks are 1-based");
        self.sizes[(i - 1).min(self.sizes.len() - 1)]
    }

    /// Members of `Ω(i)`.
    pub fn omega(&self, i: usize) -> BTreeSet<DocumentId> {
        self.newly_available.iter().take(i).flatten().copied().collect()
    }

    /// `r̄`: the first rank at which both documents are available.
    pub fn upper_threshold(&self, a: DocumentId, b: DocumentId) -> Result<usize> {
        Ok(self.availability(a)?.max(self.availability(b)?))
    }

    fn availability(&self, d: DocumentId) -> Result<usize> {
        self.first_availability(d).ok_or(Error::DocumentNotFound(d))
    }

    /// Number of candidates when sampling rank `x`: `|Ω(x)| - x + 1`.
    fn remaining_at(&self, x: usize) -> usize {
        self.omega_size(x) + 1 - x
    }
}

/// `r̲`: the higher of the two display ranks.
pub fn lower_threshold(m: &MultileavedList, a: DocumentId, b: DocumentId) -> Option<usize> {
    Some(m.rank(a)?.min(m.rank(b)?))
}

/// Samples a multileaved list of length `k`.
pub fn construct_ppm_list<R: Rng + ?Sized>(rankers: &RankerSet, k: usize, rng: &mut R) -> Result<MultileavedList> {
    construct_with_index(&build_choice_index(rankers), k, rng)
}

pub fn construct_with_index<R: Rng + ?Sized>(index: &ChoiceSetIndex, k: usize, rng: &mut R) -> Result<MultileavedList> {
    if k > index.num_docs() {
        return Err(Error::ListTooLong {
            k,
            docs: index.num_docs(),
        });
    }
    let mut pool: Vec<DocumentId> = Vec::new();
    let mut displayed = Vec::with_capacity(k);
    for n in 1..=k {
        pool.extend_from_slice(&index.newly_available[n - 1]);
        debug_assert_eq!(pool.len(), index.remaining_at(n));
        let pick = rng.random_range(0..pool.len());
        displayed.push(pool.swap_remove(pick));
    }
    Ok(MultileavedList::new(displayed))
}

/// Probability that neither document is placed above their shared threshold
/// `r̄`, in any numeric type.
pub fn pair_weight_in<S: Scalar>(a: DocumentId, b: DocumentId, index: &ChoiceSetIndex) -> Result<S> {
    let (ra, rb) = (index.availability(a)?, index.availability(b)?);
    let (min_x, upper) = (ra.min(rb), ra.max(rb));
    let mut w = S::one();
    for x in min_x..upper {
        let remaining = index.remaining_at(x) as u64;
        if remaining <= 1 {
            return Err(Error::ZeroProbabilityPair);
        }
        w *= S::from_ratio(remaining - 1, remaining);
    }
    Ok(w)
}

pub fn pair_weight(a: DocumentId, b: DocumentId, index: &ChoiceSetIndex) -> Result<f64> {
    pair_weight_in(a, b, index)
}

/// Preference matrix inferred from one impression.
pub fn infer_ppm<S: Scalar>(
    rankers: &RankerSet,
    m: &MultileavedList,
    c: &ClickVector,
    index: &ChoiceSetIndex,
) -> Result<PreferenceMatrix<S>> {
    if m.len() != c.len() {
        return Err(Error::DimensionMismatch {
            expected: m.len(),
            actual: c.len(),
        });
    }
    let n_rankers = rankers.num_rankers();
    let mut p = PreferenceMatrix::zeros(n_rankers);
    let mut phi = vec![S::zero(); n_rankers];
    for pair in extract_click_preferences(m, c) {
        let upper = index.upper_threshold(pair.winner, pair.loser)?;
        let lower = lower_threshold(m, pair.winner, pair.loser).expect("both documents displayed");
        if lower < upper {
            continue;
        }
        let score = S::one() / pair_weight_in::<S>(pair.winner, pair.loser, index)?;
        for (n, slot) in phi.iter_mut().enumerate() {
            *slot = if rankers.ranking(n).prefers(pair.winner, pair.loser) {
                score.clone()
            } else {
                -score.clone()
            };
        }
        for n in 0..n_rankers {
            for mm in 0..n_rankers {
                if n != mm && phi[n] != phi[mm] {
                    p.add_at(n, mm, phi[n].clone() - phi[mm].clone());
                }
            }
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeMap;

    const A: DocumentId = DocumentId(0);
    const B: DocumentId = DocumentId(1);
    const C: DocumentId = DocumentId(2);
    const D: DocumentId = DocumentId(3);

    fn set(ids: &[DocumentId]) -> BTreeSet<DocumentId> {
        ids.iter().copied().collect()
    }

    #[test]
    fn choice_sets_two_rankers() {
        let r = RankerSet::from_ids(&[&[0, 1, 2], &[1, 0, 2]]).unwrap();
        let idx = build_choice_index(&r);
        assert_eq!(idx.omega(1), set(&[A, B]));
        assert_eq!(idx.omega(2), set(&[A, B]));
        assert_eq!(idx.omega(3), set(&[A, B, C]));
    }

    #[test]
    fn choice_sets_single_ranker() {
        let r = RankerSet::from_ids(&[&[0, 1]]).unwrap();
        let idx = build_choice_index(&r);
        assert_eq!(idx.omega(1), set(&[A]));
        assert_eq!(idx.omega(2), set(&[A, B]));
    }

    #[test]
    fn choice_sets_match_naive_union() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            let lists: Vec<Vec<u32>> = (0..4)
                .map(|_| {
                    let mut l: Vec<u32> = (0..6).collect();
                    for i in (1..6).rev() {
                        l.swap(i, rng.random_range(0..=i));
                    }
                    l
                })
                .collect();
            let refs: Vec<&[u32]> = lists.iter().map(Vec::as_slice).collect();
            let idx = build_choice_index(&RankerSet::from_ids(&refs).unwrap());
            for i in 1..=6 {
                let naive: BTreeSet<DocumentId> = lists
                    .iter()
                    .flat_map(|l| l[..i].iter().map(|&d| DocumentId(d)))
                    .collect();
                assert_eq!(idx.omega(i), naive);
                assert_eq!(idx.omega_size(i), naive.len());
                assert!(naive.len() >= i);
            }
        }
    }

    fn frequencies(rankers: &RankerSet, k: usize, draws: usize) -> BTreeMap<Vec<DocumentId>, f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut counts = BTreeMap::new();
        for _ in 0..draws {
            let m = construct_ppm_list(rankers, k, &mut rng).unwrap();
            assert!(m.is_considerate(rankers));
            *counts.entry(m.displayed).or_insert(0.0) += 1.0;
        }
        counts.values_mut().for_each(|v| *v /= draws as f64);
        counts
    }

    #[test]
    fn opposite_rankers_split_evenly() {
        let r = RankerSet::from_ids(&[&[0, 1], &[1, 0]]).unwrap();
        let f = frequencies(&r, 2, 20_000);
        assert_eq!(f.len(), 2);
        assert!((f[&vec![A, B]] - 0.5).abs() < 0.02);
    }

    #[test]
    fn identical_rankers_reproduce_the_ranking() {
        let r = RankerSet::from_ids(&[&[2, 0, 3, 1], &[2, 0, 3, 1]]).unwrap();
        let f = frequencies(&r, 4, 1000);
        assert_eq!(f.keys().collect::<Vec<_>>(), vec![&vec![C, A, D, B]]);
    }

    #[test]
    fn shared_top_document_is_forced() {
        let r = RankerSet::from_ids(&[&[0, 1, 2], &[0, 2, 1]]).unwrap();
        let f = frequencies(&r, 3, 20_000);
        assert_eq!(f.len(), 2);
        assert!((f[&vec![A, B, C]] - 0.5).abs() < 0.02);
        assert!((f[&vec![A, C, B]] - 0.5).abs() < 0.02);
    }

    #[test]
    fn list_longer_than_candidates() {
        let r = RankerSet::from_ids(&[&[0, 1], &[1, 0]]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            construct_ppm_list(&r, 3, &mut rng),
            Err(Error::ListTooLong { k: 3, docs: 2 })
        ));
    }

    #[test]
    fn weight_examples() {
        let r = RankerSet::from_ids(&[&[0, 1, 2, 3], &[1, 2, 0, 3]]).unwrap();
        let idx = build_choice_index(&r);
        // A and B are both available at rank 1
        assert_eq!(pair_weight(A, B, &idx).unwrap(), 1.0);
        // A available at 1, C at 2, |Ω(1)| = 2
        assert_eq!(idx.upper_threshold(A, C).unwrap(), 2);
        assert_eq!(pair_weight(A, C, &idx).unwrap(), 0.5);
        assert_eq!(
            pair_weight_in::<BigRational>(C, A, &idx).unwrap(),
            BigRational::from_ratio(1, 2)
        );
    }

    #[test]
    fn forced_document_pair_has_zero_weight() {
        let r = RankerSet::from_ids(&[&[0, 1, 2], &[0, 2, 1]]).unwrap();
        let idx = build_choice_index(&r);
        // A is the only candidate at rank 1, so (A, B) can never both sit at rank >= 2
        assert!(matches!(pair_weight(A, B, &idx), Err(Error::ZeroProbabilityPair)));
    }

    #[test]
    fn weight_matches_monte_carlo() {
        let r = RankerSet::from_ids(&[&[0, 1, 2, 3, 4], &[2, 3, 0, 4, 1], &[1, 0, 4, 3, 2]]).unwrap();
        let idx = build_choice_index(&r);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let draws = 100_000;
        let lists: Vec<_> = (0..draws)
            .map(|_| construct_with_index(&idx, 5, &mut rng).unwrap())
            .collect();
        for a in 0..5u32 {
            for b in a + 1..5 {
                let (a, b) = (DocumentId(a), DocumentId(b));
                let Ok(w) = pair_weight(a, b, &idx) else { continue };
                let upper = idx.upper_threshold(a, b).unwrap();
                let hits = lists
                    .iter()
                    .filter(|m| lower_threshold(m, a, b).unwrap() >= upper)
                    .count();
                assert!((hits as f64 / draws as f64 - w).abs() < 0.01, "{a} {b}");
            }
        }
    }

    #[test]
    fn inference_examples() {
        let r = RankerSet::from_ids(&[&[0, 1], &[1, 0]]).unwrap();
        let idx = build_choice_index(&r);
        let m = MultileavedList::new(vec![A, B]);

        let none: PreferenceMatrix = infer_ppm(&r, &m, &ClickVector::none(2), &idx).unwrap();
        assert!(none.is_zero());

        let p: PreferenceMatrix = infer_ppm(&r, &m, &ClickVector::at_ranks(2, &[1]), &idx).unwrap();
        assert_eq!(p.rows(), vec![vec![0.0, 2.0], vec![-2.0, 0.0]]);

        let p: PreferenceMatrix = infer_ppm(&r, &m, &ClickVector::at_ranks(2, &[2]), &idx).unwrap();
        assert_eq!(p.rows(), vec![vec![0.0, -2.0], vec![2.0, 0.0]]);
    }

    #[test]
    fn pairs_above_threshold_score_nothing() {
        // l1 = A B C D, l2 = B C A D; m = A C ...: pair C > A has r̄ = 2, r̲ = 1
        let r = RankerSet::from_ids(&[&[0, 1, 2, 3], &[1, 2, 0, 3]]).unwrap();
        let idx = build_choice_index(&r);
        let m = MultileavedList::new(vec![A, C, B, D]);
        let p: PreferenceMatrix = infer_ppm(&r, &m, &ClickVector::at_ranks(4, &[2]), &idx).unwrap();
        // C > A is gated out; C > B passes but both rankers put B above C
        assert!(p.is_zero());
    }

    #[test]
    fn weighted_inference() {
        let r = RankerSet::from_ids(&[&[0, 1, 2, 3], &[1, 2, 0, 3]]).unwrap();
        let idx = build_choice_index(&r);
        // B at 1, C at 2, A at 3: click on A beats B and C above it
        let m = MultileavedList::new(vec![B, C, A, D]);
        let p: PreferenceMatrix<BigRational> = infer_ppm(&r, &m, &ClickVector::at_ranks(4, &[3]), &idx).unwrap();
        // A > B: r̄ = 1, weight 1, r1 agrees and r2 does not: +2
        // A > C: r̄ = 2, weight 1/2: +4
        // A > D: r̄ = 4 > r̲ = 3, gated out
        assert_eq!(p.get(0, 1), &BigRational::from_ratio(6, 1));
        assert!(p.is_antisymmetric());
    }

    proptest::proptest! {
        #[test]
        fn inference_is_antisymmetric(seed in proptest::prelude::any::<u64>(), bits in 0u32..64) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let lists: Vec<Vec<u32>> = (0..3)
                .map(|_| {
                    let mut l: Vec<u32> = (0..6).collect();
                    for i in (1..6).rev() {
                        l.swap(i, rng.random_range(0..=i));
                    }
                    l
                })
                .collect();
            let refs: Vec<&[u32]> = lists.iter().map(Vec::as_slice).collect();
            let r = RankerSet::from_ids(&refs).unwrap();
            let idx = build_choice_index(&r);
            let m = construct_with_index(&idx, 6, &mut rng).unwrap();
            proptest::prop_assert!(m.is_considerate(&r));
            let p: PreferenceMatrix = infer_ppm(&r, &m, &ClickVector::from_bits(6, bits), &idx).unwrap();
            proptest::prop_assert!(p.is_antisymmetric());
        }

        #[test]
        fn weight_is_symmetric_in_its_arguments(seed in proptest::prelude::any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let lists: Vec<Vec<u32>> = (0..3)
                .map(|_| {
                    let mut l: Vec<u32> = (0..6).collect();
                    for i in (1..6).rev() {
                        l.swap(i, rng.random_range(0..=i));
                    }
                    l
                })
                .collect();
            let refs: Vec<&[u32]> = lists.iter().map(Vec::as_slice).collect();
            let idx = build_choice_index(&RankerSet::from_ids(&refs).unwrap());
            for a in 0..6 {
                for b in 0..6 {
                    let x = pair_weight(DocumentId(a), DocumentId(b), &idx).ok();
                    let y = pair_weight(DocumentId(b), DocumentId(a), &idx).ok();
                    proptest::prop_assert_eq!(x, y);
                }
            }
        }
    }
}
