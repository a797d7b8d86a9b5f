//! Datasets, feature rankers and NDCG-based ground truth.

mod letor;
mod synthetic;

pub use letor::{parse_letor, read_letor, serialize_letor, write_letor};
pub use synthetic::{generate_synthetic, SyntheticSpec, SyntheticSplit};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{DocumentId, RankerSet, Ranking};

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub id: DocumentId,
    pub features: Vec<f64>,
    pub relevance: u8,
    /// Trailing `# ...` text from the source line, kept verbatim.
    pub comment: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryData {
    pub query_id: String,
    pub documents: Vec<Document>,
}

impl QueryData {
    pub fn document(&self, id: DocumentId) -> Option<&Document> {
        // ids are assigned by encounter order, so try the direct slot first
        match self.documents.get(id.0 as usize) {
            Some(d) if d.id == id => Some(d),
            _ => self.documents.iter().find(|d| d.id == id),
        }
    }

    pub fn relevance(&self, id: DocumentId) -> Option<u8> {
        self.document(id).map(|d| d.relevance)
    }

    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub queries: Vec<QueryData>,
    pub feature_count: usize,
    pub relevance_max: u8,
}

impl Dataset {
    pub fn num_documents(&self) -> usize {
        self.queries.iter().map(QueryData::len).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Ascending,
    #[default]
    Descending,
}

/// A ranker that sorts documents by a single feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureRanker {
    pub feature_index: usize,
    #[serde(default)]
    pub direction: Direction,
}

impl FeatureRanker {
    pub fn descending(feature_index: usize) -> Self {
        FeatureRanker {
            feature_index,
            direction: Direction::Descending,
        }
    }
}

/// Sorts the query's documents by the ranker's feature, ties broken by id.
pub fn rank_documents(ranker: &FeatureRanker, q: &QueryData) -> Ranking {
    let f = ranker.feature_index;
    let mut docs: Vec<&Document> = q.documents.iter().collect();
    docs.sort_by(|a, b| {
        let ord = a.features[f].total_cmp(&b.features[f]);
        let ord = match ranker.direction {
            Direction::Ascending => ord,
            Direction::Descending => ord.reverse(),
        };
        ord.then(a.id.cmp(&b.id))
    });
    Ranking::new(docs.into_iter().map(|d| d.id).collect()).expect("query ids are unique")
}

/// Rankings of every ranker for one query.
pub fn ranker_set(rankers: &[FeatureRanker], q: &QueryData) -> RankerSet {
    RankerSet::new(rankers.iter().map(|r| rank_documents(r, q)).collect())
        .expect("feature rankers rank the same documents")
}

fn gain(rel: u8) -> f64 {
    (1u64 << rel) as f64 - 1.0
}

fn dcg(rels: impl Iterator<Item = u8>) -> f64 {
    rels.enumerate()
        .map(|(i, rel)| gain(rel) / ((i + 2) as f64).log2())
        .sum()
}

/// NDCG@k with gain `2^rel - 1` and discount `log2(rank + 1)`.
///
/// Queries without any relevant document score 1.0.
pub fn ndcg_at_k(l: &Ranking, q: &QueryData, k: usize) -> f64 {
    let mut ideal: Vec<u8> = q.documents.iter().map(|d| d.relevance).collect();
    ideal.sort_unstable_by(|a, b| b.cmp(a));
    let ideal_dcg = dcg(ideal.into_iter().take(k));
    if ideal_dcg == 0.0 {
        return 1.0;
    }
    let actual = dcg(l.docs().iter().take(k).map(|&d| q.relevance(d).unwrap_or(0)));
    actual / ideal_dcg
}

/// Mean NDCG per ranker and the signs of their pairwise differences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub ndcg: Vec<f64>,
    /// `signs[n][m]` is the sign of `ndcg[n] - ndcg[m]`; zero marks a tie.
    pub signs: Vec<Vec<i8>>,
}

impl GroundTruth {
    pub fn from_ndcg(ndcg: Vec<f64>) -> Self {
        let signs = ndcg
            .iter()
            .map(|a| {
                ndcg.iter()
                    .map(|b| match a.partial_cmp(b) {
                        Some(std::cmp::Ordering::Greater) => 1,
                        Some(std::cmp::Ordering::Less) => -1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect();
        GroundTruth { ndcg, signs }
    }

    pub fn num_rankers(&self) -> usize {
        self.ndcg.len()
    }

    pub fn is_tie(&self, n: usize, m: usize) -> bool {
        self.signs[n][m] == 0
    }

    /// Unordered ranker pairs with exactly equal NDCG.
    pub fn ties(&self) -> Vec<(usize, usize)> {
        let r = self.num_rankers();
        (0..r)
            .flat_map(|n| (n + 1..r).map(move |m| (n, m)))
            .filter(|&(n, m)| self.is_tie(n, m))
            .collect()
    }
}

pub fn ground_truth_matrix(rankers: &[FeatureRanker], data: &Dataset, k: usize) -> Result<GroundTruth> {
    if rankers.len() < 2 {
        return Err(Error::Config("ground truth needs at least two rankers".into()));
    }
    if data.queries.is_empty() {
        return Err(Error::NoQueries);
    }
    for r in rankers {
        if r.feature_index >= data.feature_count {
            return Err(Error::Config(format!(
                "feature index {} out of range (dataset has {} features)",
                r.feature_index, data.feature_count
            )));
        }
    }
    let nq = data.queries.len() as f64;
    let ndcg = rankers
        .iter()
        .map(|r| {
            data.queries
                .iter()
                .map(|q| ndcg_at_k(&rank_documents(r, q), q, k))
                .sum::<f64>()
                / nq
        })
        .collect();
    Ok(GroundTruth::from_ndcg(ndcg))
}
