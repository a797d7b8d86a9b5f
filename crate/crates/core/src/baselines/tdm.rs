//! Team Draft Multileaving.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::{sign, Scalar};
use crate::types::{ClickVector, DocumentId, MultileavedList, PreferenceMatrix, RankerSet, TeamAssignment};

/// Builds a list in rounds: each round visits the rankers in a fresh random
/// order and every visited ranker contributes its best unplaced document.
pub fn construct_tdm<R: Rng + ?Sized>(rankers: &RankerSet, k: usize, rng: &mut R) -> Result<MultileavedList> {
    let n_docs = rankers.num_docs();
    if k > n_docs {
        return Err(Error::ListTooLong { k, docs: n_docs });
    }
    let mut displayed: Vec<DocumentId> = Vec::with_capacity(k);
    let mut teams = Vec::with_capacity(k);
    let mut cursors = vec![0usize; rankers.num_rankers()];
    let mut order: Vec<usize> = (0..rankers.num_rankers()).collect();
    'rounds: while displayed.len() < k {
        order.shuffle(rng);
        for &r in &order {
            if displayed.len() == k {
                break 'rounds;
            }
            let docs = rankers.ranking(r).docs();
            while displayed.contains(&docs[cursors[r]]) {
                cursors[r] += 1;
            }
            displayed.push(docs[cursors[r]]);
            teams.push(r);
        }
    }
    Ok(MultileavedList::with_teams(displayed, TeamAssignment(teams)))
}

/// Sign of the difference in clicks credited to each team.
pub fn infer_tdm<S: Scalar>(
    assignment: &TeamAssignment,
    c: &ClickVector,
    n_rankers: usize,
) -> Result<PreferenceMatrix<S>> {
    if assignment.len() != c.len() {
        return Err(Error::DimensionMismatch {
            expected: assignment.len(),
            actual: c.len(),
        });
    }
    let mut counts = vec![0i32; n_rankers];
    for (&team, &clicked) in assignment.0.iter().zip(&c.0) {
        if clicked {
            counts[team] += 1;
        }
    }
    Ok(binary_preferences(&counts))
}

/// `P[n][m] = sign(credit[n] - credit[m])`.
pub(crate) fn binary_preferences<S: Scalar, T: Copy + Into<f64>>(credit: &[T]) -> PreferenceMatrix<S> {
    let n = credit.len();
    let mut p = PreferenceMatrix::zeros(n);
    for a in 0..n {
        for b in 0..n {
            let diff = credit[a].into() - credit[b].into();
            let s = sign(&diff);
            if s != 0 {
                p.set(a, b, S::from_i64(s as i64));
            }
        }
    }
    p
}
