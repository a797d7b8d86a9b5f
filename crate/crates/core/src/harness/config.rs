//! Experiment configuration, read from TOML.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::clicksim::ClickModel;
use crate::data::{FeatureRanker, SyntheticSpec};
use crate::error::{Error, Result};
use crate::method::Method;

fn default_impressions() -> usize {
    10_000
}

fn default_k() -> usize {
    10
}

fn default_runs() -> usize {
    25
}

fn default_methods() -> Vec<Method> {
    Method::NAMES
        .iter()
        .map(|n| Method::from_name(n).expect("built-in name"))
        .collect()
}

/// Everything needed to reproduce a set of simulation runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    /// Root seed; every random stream of every run is derived from it.
    #[serde(default)]
    pub seed: u64,
    /// Impressions per run (`T`).
    #[serde(default = "default_impressions")]
    pub impressions: usize,
    /// Length of the displayed list.
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default = "default_runs")]
    pub runs: usize,
    /// NDCG cutoff for the ground truth. Defaults to `k`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ndcg_cutoff: Option<usize>,
    /// Impressions after which `E_bin` is recorded. Defaults to
    /// [`log_schedule`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checkpoints: Option<Vec<usize>>,
    /// Worker threads. Results do not depend on it, so it is left out of
    /// the echoed configuration.
    #[serde(default, skip_serializing)]
    pub threads: Option<usize>,
    pub click_model: ClickModelChoice,
    pub rankers: Vec<RankerChoice>,
    #[serde(default = "default_methods")]
    pub methods: Vec<Method>,
    pub dataset: DatasetSource,
}

/// A built-in click model by name, or explicit probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClickModelChoice {
    Named(String),
    Custom(ClickModel),
}

impl ClickModelChoice {
    pub fn resolve(&self) -> Result<ClickModel> {
        match self {
            ClickModelChoice::Named(name) => ClickModel::by_name(name),
            ClickModelChoice::Custom(m) => ClickModel::new(m.name.clone(), m.p_click.clone(), m.p_stop.clone()),
        }
    }
}

/// A bare feature index ranks descending.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RankerChoice {
    Index(usize),
    Feature(FeatureRanker),
}

impl RankerChoice {
    pub fn resolve(self) -> FeatureRanker {
        match self {
            RankerChoice::Index(i) => FeatureRanker::descending(i),
            RankerChoice::Feature(r) => r,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DatasetSource {
    /// Generated interaction and evaluation partitions.
    Synthetic(SyntheticSpec),
    /// LETOR files: queries are sampled from `interaction`, the ground truth
    /// is computed on `evaluation`.
    Letor { interaction: PathBuf, evaluation: PathBuf },
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn rankers(&self) -> Vec<FeatureRanker> {
        self.rankers.iter().map(|r| r.resolve()).collect()
    }

    pub fn ndcg_cutoff(&self) -> usize {
        self.ndcg_cutoff.unwrap_or(self.k)
    }

    /// The configured checkpoints, or the default schedule.
    pub fn schedule(&self) -> Vec<usize> {
        self.checkpoints
            .clone()
            .unwrap_or_else(|| log_schedule(self.impressions))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.impressions == 0 {
            return bad("impressions must be at least 1".into());
        }
        if self.k == 0 {
            return bad("k must be at least 1".into());
        }
        if self.runs == 0 {
            return bad("runs must be at least 1".into());
        }
        if self.ndcg_cutoff == Some(0) {
            return bad("ndcg_cutoff must be at least 1".into());
        }
        if self.threads == Some(0) {
            return bad("threads must be at least 1".into());
        }
        if self.rankers.len() < 2 {
            return bad(format!("at least two rankers are needed, got {}", self.rankers.len()));
        }
        if self.methods.is_empty() {
            return bad("no methods configured".into());
        }
        let mut seen = BTreeSet::new();
        for m in &self.methods {
            m.validate()?;
            if !seen.insert(m.name()) {
                return bad(format!("method {} is configured twice", m.name()));
            }
        }
        if let Some(points) = &self.checkpoints {
            if points.is_empty() {
                return bad("checkpoints must not be empty".into());
            }
            if points.windows(2).any(|w| w[0] >= w[1]) {
                return bad("checkpoints must be strictly increasing".into());
            }
            if points[0] == 0 || *points.last().expect("non-empty") > self.impressions {
                return bad(format!("checkpoints must lie in 1..={}", self.impressions));
            }
        }
        self.click_model.resolve()?;
        Ok(())
    }
}

/// `1, 2, 5, 10, 20, 50, ...` up to `t`, always ending at `t`.
pub fn log_schedule(t: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut decade = 1usize;
    'outer: loop {
        for step in [1, 2, 5] {
            let x = step * decade;
            if x >= t {
                break 'outer;
            }
            out.push(x);
        }
        decade *= 10;
    }
    out.push(t);
    out
}
