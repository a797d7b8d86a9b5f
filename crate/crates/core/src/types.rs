//! Domain types shared by every multileaving method.
//!
//! Ranks are 1-based throughout the crate: the top of a list is rank 1.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Identifier of a document, unique within one query's candidate set.
///
/// The ordering is only used to break ties deterministically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DocumentId(pub u32);

impl fmt::Display for DocumentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d{}", self.0)
    }
}

impl From<u32> for DocumentId {
    fn from(value: u32) -> Self {
        DocumentId(value)
    }
}

/// A permutation of a query's candidate documents, as produced by one ranker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ranking {
    docs: Vec<DocumentId>,
    positions: HashMap<DocumentId, usize>,
}

impl Ranking {
    pub fn new(docs: Vec<DocumentId>) -> Result<Self> {
        let mut positions = HashMap::with_capacity(docs.len());
        for (i, &d) in docs.iter().enumerate() {
            if positions.insert(d, i + 1).is_some() {
                return Err(Error::DuplicateDocument(d));
            }
        }
        Ok(Ranking { docs, positions })
    }

    pub fn from_ids<I: IntoIterator<Item = u32>>(ids: I) -> Result<Self> {
        Self::new(ids.into_iter().map(DocumentId).collect())
    }

    pub fn docs(&self) -> &[DocumentId] {
        &self.docs
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    /// 1-based rank of `d`, or `None` when absent.
    pub fn rank(&self, d: DocumentId) -> Option<usize> {
        self.positions.get(&d).copied()
    }

    pub fn contains(&self, d: DocumentId) -> bool {
        self.positions.contains_key(&d)
    }

    /// `true` if this ranking places `a` above `b`.
    pub fn prefers(&self, a: DocumentId, b: DocumentId) -> bool {
        match (self.rank(a), self.rank(b)) {
            (Some(ra), Some(rb)) => ra < rb,
            _ => false,
        }
    }
}

/// 1-based position of `d` in `l`.
pub fn rank_of(d: DocumentId, l: &Ranking) -> Result<usize> {
    l.rank(d).ok_or(Error::DocumentNotFound(d))
}

/// The rankings of every compared ranker for one query.
///
/// All rankings cover the same document set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankerSet {
    rankings: Vec<Ranking>,
}

impl RankerSet {
    pub fn new(rankings: Vec<Ranking>) -> Result<Self> {
        let Some(first) = rankings.first() else {
            return Err(Error::Config("a ranker set needs at least one ranking".into()));
        };
        let reference: BTreeSet<_> = first.docs().iter().copied().collect();
        for l in &rankings[1..] {
            if l.len() != first.len() || l.docs().iter().any(|d| !reference.contains(d)) {
                return Err(Error::InconsistentDocuments);
            }
        }
        Ok(RankerSet { rankings })
    }

    /// Convenience constructor from raw id lists, mostly for tests and examples.
    pub fn from_ids(lists: &[&[u32]]) -> Result<Self> {
        let rankings = lists
            .iter()
            .map(|l| Ranking::from_ids(l.iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(rankings)
    }

    pub fn rankings(&self) -> &[Ranking] {
        &self.rankings
    }

    pub fn ranking(&self, n: usize) -> &Ranking {
        &self.rankings[n]
    }

    pub fn num_rankers(&self) -> usize {
        self.rankings.len()
    }

    pub fn num_docs(&self) -> usize {
        self.rankings[0].len()
    }

    /// Candidate documents in the first ranker's order.
    pub fn documents(&self) -> &[DocumentId] {
        self.rankings[0].docs()
    }

    /// Best (smallest) rank any ranker gives `d`.
    pub fn best_rank(&self, d: DocumentId) -> Option<usize> {
        self.rankings.iter().filter_map(|l| l.rank(d)).min()
    }
}

/// Per displayed rank, the index of the ranker that contributed the document.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TeamAssignment(pub Vec<usize>);

impl TeamAssignment {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Method-specific provenance attached to a multileaved list.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Payload {
    None,
    Teams(TeamAssignment),
}

/// The list shown to the user, with whatever the method needs for inference.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultileavedList {
    pub displayed: Vec<DocumentId>,
    pub payload: Payload,
}

impl MultileavedList {
    pub fn new(displayed: Vec<DocumentId>) -> Self {
        MultileavedList {
            displayed,
            payload: Payload::None,
        }
    }

    pub fn with_teams(displayed: Vec<DocumentId>, teams: TeamAssignment) -> Self {
        debug_assert_eq!(displayed.len(), teams.len());
        MultileavedList {
            displayed,
            payload: Payload::Teams(teams),
        }
    }

    pub fn len(&self) -> usize {
        self.displayed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.displayed.is_empty()
    }

    /// 1-based display rank of `d`.
    pub fn rank(&self, d: DocumentId) -> Option<usize> {
        self.displayed.iter().position(|&x| x == d).map(|i| i + 1)
    }

    pub fn teams(&self) -> Option<&TeamAssignment> {
        match &self.payload {
            Payload::Teams(t) => Some(t),
            Payload::None => None,
        }
    }

    /// `true` if no document is shown above the best rank any ranker gives it.
    pub fn is_considerate(&self, rankers: &RankerSet) -> bool {
        self.first_inconsiderate_rank(rankers).is_none()
    }

    pub fn first_inconsiderate_rank(&self, rankers: &RankerSet) -> Option<usize> {
        self.displayed
            .iter()
            .enumerate()
            .find_map(|(i, &d)| match rankers.best_rank(d) {
                Some(best) if best <= i + 1 => None,
                _ => Some(i + 1),
            })
    }
}

/// Click indicator per displayed rank.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClickVector(pub Vec<bool>);

impl ClickVector {
    pub fn none(k: usize) -> Self {
        ClickVector(vec![false; k])
    }

    /// Builds a vector of length `k` with clicks on the given 1-based ranks.
    pub fn at_ranks(k: usize, ranks: &[usize]) -> Self {
        let mut c = vec![false; k];
        for &r in ranks {
            c[r - 1] = true;
        }
        ClickVector(c)
    }

    /// Decodes bit `i` of `bits` as the click at rank `i + 1`.
    pub fn from_bits(k: usize, bits: u32) -> Self {
        ClickVector((0..k).map(|i| bits >> i & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn any(&self) -> bool {
        self.0.iter().any(|&c| c)
    }

    pub fn count(&self) -> usize {
        self.0.iter().filter(|&&c| c).count()
    }
}

/// A click-inferred preference of one document over another.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DocPairPreference {
    pub winner: DocumentId,
    pub loser: DocumentId,
}

/// Document preferences implied by a click vector.
///
/// A clicked document beats every unclicked document displayed above it and
/// the nearest unclicked document below it, if the list has one.
pub fn extract_click_preferences(m: &MultileavedList, c: &ClickVector) -> Vec<DocPairPreference> {
    debug_assert_eq!(m.len(), c.len());
    let clicks = &c.0;
    let mut out = Vec::new();
    for (i, &clicked) in clicks.iter().enumerate() {
        if !clicked {
            continue;
        }
        let winner = m.displayed[i];
        for j in (0..i).filter(|&j| !clicks[j]) {
            out.push(DocPairPreference {
                winner,
                loser: m.displayed[j],
            });
        }
        if let Some(j) = (i + 1..clicks.len()).find(|&j| !clicks[j]) {
            out.push(DocPairPreference {
                winner,
                loser: m.displayed[j],
            });
        }
    }
    out
}

/// Square matrix of pairwise ranker preferences.
#[derive(Debug, Clone, PartialEq)]
pub struct PreferenceMatrix<S = f64> {
    size: usize,
    values: Vec<S>,
}

impl<S: Scalar> PreferenceMatrix<S> {
    pub fn zeros(size: usize) -> Self {
        PreferenceMatrix {
            size,
            values: vec![S::zero(); size * size],
        }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let size = rows.len();
        let mut values = Vec::with_capacity(size * size);
        for row in rows {
            if row.len() != size {
                return Err(Error::DimensionMismatch {
                    expected: size,
                    actual: row.len(),
                });
            }
            values.extend(row);
        }
        Ok(PreferenceMatrix { size, values })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, n: usize, m: usize) -> &S {
        &self.values[n * self.size + m]
    }

    pub fn set(&mut self, n: usize, m: usize, value: S) {
        self.values[n * self.size + m] = value;
    }

    pub fn add_at(&mut self, n: usize, m: usize, delta: S) {
        self.values[n * self.size + m] += delta;
    }

    /// Adds `delta` to `(n, m)` and subtracts it from `(m, n)`.
    pub fn add_antisymmetric(&mut self, n: usize, m: usize, delta: S) {
        if n == m {
            return;
        }
        self.values[m * self.size + n] -= delta.clone();
        self.values[n * self.size + m] += delta;
    }

    pub fn rows(&self) -> Vec<Vec<S>> {
        self.values.chunks(self.size).map(|r| r.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max)
    }

    /// Zero diagonal and `P[n][m] == -P[m][n]` exactly.
    pub fn is_antisymmetric(&self) -> bool {
        (0..self.size).all(|n| self.get(n, n).is_zero() && (0..n).all(|m| *self.get(n, m) == -self.get(m, n).clone()))
    }

    pub fn to_f64(&self) -> PreferenceMatrix<f64> {
        PreferenceMatrix {
            size: self.size,
            values: self.values.iter().map(Scalar::to_f64).collect(),
        }
    }

    pub fn scale(&mut self, factor: &S) {
        for v in &mut self.values {
            *v *= factor.clone();
        }
    }

    pub fn merge(&mut self, delta: &PreferenceMatrix<S>) -> Result<()> {
        if delta.size != self.size {
            return Err(Error::DimensionMismatch {
                expected: self.size,
                actual: delta.size,
            });
        }
        for (a, b) in self.values.iter_mut().zip(&delta.values) {
            *a += b.clone();
        }
        Ok(())
    }
}

/// Element-wise sum of two preference matrices.
pub fn merge_preferences<S: Scalar>(
    mut into: PreferenceMatrix<S>,
    delta: &PreferenceMatrix<S>,
) -> Result<PreferenceMatrix<S>> {
    into.merge(delta)?;
    Ok(into)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const A: DocumentId = DocumentId(0);
    const B: DocumentId = DocumentId(1);
    const C: DocumentId = DocumentId(2);
    const D: DocumentId = DocumentId(3);

    fn pairs(v: &[(DocumentId, DocumentId)]) -> BTreeSet<DocPairPreference> {
        v.iter()
            .map(|&(winner, loser)| DocPairPreference { winner, loser })
            .collect()
    }

    #[test]
    fn rank_of_reads_positions() {
        let l = Ranking::new(vec![A, B, C]).unwrap();
        assert_eq!(rank_of(A, &l).unwrap(), 1);
        assert_eq!(rank_of(C, &l).unwrap(), 3);
        assert_eq!(rank_of(B, &l).unwrap(), 2);
        assert!(matches!(rank_of(D, &l), Err(Error::DocumentNotFound(_))));
    }

    #[test]
    fn ranking_rejects_duplicates() {
        assert!(matches!(Ranking::new(vec![A, B, A]), Err(Error::DuplicateDocument(_))));
    }

    #[test]
    fn ranker_set_requires_same_documents() {
        assert!(RankerSet::from_ids(&[&[0, 1], &[0, 2]]).is_err());
        assert!(RankerSet::from_ids(&[&[0, 1], &[0, 1, 2]]).is_err());
        assert!(RankerSet::from_ids(&[&[0, 1], &[1, 0]]).is_ok());
    }

    #[test]
    fn single_click_beats_above_and_next_below() {
        let m = MultileavedList::new(vec![A, B, C, D]);
        let got = extract_click_preferences(&m, &ClickVector::at_ranks(4, &[3]));
        assert_eq!(
            got.into_iter().collect::<BTreeSet<_>>(),
            pairs(&[(C, A), (C, B), (C, D)])
        );
    }

    #[test]
    fn no_clicks_no_preferences() {
        let m = MultileavedList::new(vec![A, B, C, D]);
        assert!(extract_click_preferences(&m, &ClickVector::none(4)).is_empty());
    }

    #[test]
    fn two_clicks() {
        let m = MultileavedList::new(vec![A, B, C, D]);
        let got = extract_click_preferences(&m, &ClickVector::at_ranks(4, &[1, 3]));
        assert_eq!(got.len(), 3);
        assert_eq!(
            got.into_iter().collect::<BTreeSet<_>>(),
            pairs(&[(A, B), (C, B), (C, D)])
        );
    }

    /// Direct reading of the click-preference rule: for every ordered pair,
    /// test the condition on positions instead of scanning from clicks.
    fn brute_force_preferences(m: &[DocumentId], c: &[bool]) -> BTreeSet<DocPairPreference> {
        let mut out = BTreeSet::new();
        for x in 0..m.len() {
            for y in 0..m.len() {
                if x == y || !c[x] || c[y] {
                    continue;
                }
                let above = y < x;
                let next_below = y > x && (x + 1..y).all(|z| c[z]);
                if above || next_below {
                    out.insert(DocPairPreference {
                        winner: m[x],
                        loser: m[y],
                    });
                }
            }
        }
        out
    }

    #[test]
    fn matches_brute_force_on_all_patterns_of_four() {
        let docs = vec![A, B, C, D];
        let m = MultileavedList::new(docs.clone());
        for bits in 0..16u32 {
            let c = ClickVector::from_bits(4, bits);
            let got = extract_click_preferences(&m, &c);
            let set: BTreeSet<_> = got.iter().copied().collect();
            assert_eq!(set.len(), got.len(), "duplicates for {bits:b}");
            assert_eq!(set, brute_force_preferences(&docs, &c.0), "pattern {bits:b}");
        }
    }

    #[test]
    fn merge_examples() {
        let z = PreferenceMatrix::<f64>::zeros(2);
        assert!(merge_preferences(z.clone(), &z).unwrap().is_zero());

        let p = PreferenceMatrix::from_rows(vec![vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        let mut neg = p.clone();
        neg.scale(&-1.0);
        assert!(merge_preferences(p.clone(), &neg).unwrap().is_zero());

        let q = PreferenceMatrix::from_rows(vec![vec![0.0, 2.0], vec![-2.0, 0.0]]).unwrap();
        let sum = merge_preferences(p, &q).unwrap();
        assert_eq!(sum.rows(), vec![vec![0.0, 3.0], vec![-3.0, 0.0]]);

        assert!(matches!(
            merge_preferences(sum, &PreferenceMatrix::zeros(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn considerateness_of_lists() {
        let r = RankerSet::from_ids(&[&[0, 1, 2], &[1, 0, 2]]).unwrap();
        assert!(MultileavedList::new(vec![B, A, C]).is_considerate(&r));
        assert_eq!(
            MultileavedList::new(vec![C, A, B]).first_inconsiderate_rank(&r),
            Some(1)
        );
    }

    fn antisym(n: usize) -> impl Strategy<Value = PreferenceMatrix<f64>> {
        proptest::collection::vec(-5i32..5, n * n).prop_map(move |v| {
            let mut p = PreferenceMatrix::zeros(n);
            for a in 0..n {
                for b in 0..a {
                    p.add_antisymmetric(a, b, v[a * n + b] as f64);
                }
            }
            p
        })
    }

    proptest! {
        #[test]
        fn preferences_are_irreflexive_and_acyclic(len in 1usize..9, bits in any::<u32>()) {
            let m = MultileavedList::new((0..len as u32).map(DocumentId).collect());
            let c = ClickVector::from_bits(len, bits);
            let prefs = extract_click_preferences(&m, &c);
            let set: BTreeSet<_> = prefs.iter().copied().collect();
            for p in &prefs {
                prop_assert_ne!(p.winner, p.loser);
                let wi = m.rank(p.winner).unwrap() - 1;
                let li = m.rank(p.loser).unwrap() - 1;
                prop_assert!(c.0[wi] && !c.0[li]);
                let reversed = DocPairPreference { winner: p.loser, loser: p.winner };
                prop_assert!(!set.contains(&reversed));
            }
        }

        #[test]
        fn merge_is_commutative_and_associative(a in antisym(3), b in antisym(3), c in antisym(3)) {
            let ab = merge_preferences(a.clone(), &b).unwrap();
            let ba = merge_preferences(b.clone(), &a).unwrap();
            prop_assert_eq!(&ab, &ba);
            let ab_c = merge_preferences(ab, &c).unwrap();
            let a_bc = merge_preferences(a, &merge_preferences(b, &c).unwrap()).unwrap();
            prop_assert_eq!(&ab_c, &a_bc);
            prop_assert!(ab_c.is_antisymmetric());
        }
    }
}
