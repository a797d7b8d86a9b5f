//! Seeded synthetic learning-to-rank data.
//!
//! Feature `f` of a document is `s_f * rel / rel_max + noise * N(0, 1)`, where
//! the signal strength `s_f` falls linearly from 1 for feature 0 to 0 for the
//! last feature. Rankers on low feature indices are therefore strictly better
//! in expectation, and the last feature is pure noise.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Normal;
use serde::{Deserialize, Serialize};

use super::{Dataset, Document, QueryData};
use crate::error::{Error, Result};
use crate::types::DocumentId;

fn default_noise() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticSpec {
    pub n_queries: usize,
    pub n_docs_per_query: usize,
    pub n_features: usize,
    pub relevance_max: u8,
    pub seed: u64,
    /// Standard deviation of the Gaussian noise added to every feature.
    #[serde(default = "default_noise")]
    pub noise: f64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            n_queries: 100,
            n_docs_per_query: 50,
            n_features: 5,
            relevance_max: 4,
            seed: 0,
            noise: default_noise(),
        }
    }
}

/// Disjoint query sets: one to simulate users on, one to compute ground truth.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSplit {
    pub interaction: Dataset,
    pub evaluation: Dataset,
}

impl SyntheticSpec {
    fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidSpec(msg.into()));
        if self.n_queries == 0 {
            return bad("n_queries must be at least 1");
        }
        if self.n_docs_per_query == 0 {
            return bad("n_docs_per_query must be at least 1");
        }
        if self.n_features == 0 {
            return bad("n_features must be at least 1");
        }
        if self.relevance_max == 0 || self.relevance_max > 16 {
            return bad("relevance_max must be in 1..=16");
        }
        if !self.noise.is_finite() || self.noise < 0.0 {
            return bad("noise must be a non-negative finite number");
        }
        Ok(())
    }

    /// Signal strength of feature `f`.
    pub fn strength(&self, f: usize) -> f64 {
        if self.n_features == 1 {
            1.0
        } else {
            1.0 - f as f64 / (self.n_features - 1) as f64
        }
    }

    pub fn generate(&self) -> Result<Dataset> {
        generate_synthetic(self)
    }

    /// Interaction and evaluation partitions drawn from independent seeds.
    pub fn generate_split(&self) -> Result<SyntheticSplit> {
        let derived = |tag: u64| SyntheticSpec {
            seed: self.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(tag),
            ..self.clone()
        };
        Ok(SyntheticSplit {
            interaction: generate_synthetic(&derived(1))?,
            evaluation: generate_synthetic(&derived(2))?,
        })
    }
}

pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<Dataset> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    // grade g has mass proportional to 2^-g, so high grades are rarer
    let grades = WeightedIndex::new((0..=spec.relevance_max).map(|g| 0.5f64.powi(g as i32))).expect("positive weights");
    let noise = Normal::new(0.0, spec.noise).expect("validated noise");
    let rel_max = spec.relevance_max as f64;

    let queries = (0..spec.n_queries)
        .map(|qi| QueryData {
            query_id: (qi + 1).to_string(),
            documents: (0..spec.n_docs_per_query)
                .map(|di| {
                    let relevance = grades.sample(&mut rng) as u8;
                    let signal = relevance as f64 / rel_max;
                    let features = (0..spec.n_features)
                        .map(|f| spec.strength(f) * signal + noise.sample(&mut rng))
                        .collect();
                    Document {
                        id: DocumentId(di as u32),
                        features,
                        relevance,
                        comment: None,
                    }
                })
                .collect(),
        })
        .collect();

    Ok(Dataset {
        queries,
        feature_count: spec.n_features,
        relevance_max: spec.relevance_max,
    })
}
