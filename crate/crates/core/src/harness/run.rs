use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::binary_error;
use super::config::{DatasetSource, ExperimentConfig};
use crate::clicksim::{simulate_clicks, ClickModel};
use crate::data::{ground_truth_matrix, ranker_set, read_letor, Dataset, FeatureRanker, GroundTruth};
use crate::error::{Error, Result};
use crate::method::{Method, QueryContext};
use crate::types::PreferenceMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub impression: usize,
    pub e_bin: f64,
}

/// Binary error over one run of one method.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorCurve {
    pub method: String,
    pub run: usize,
    pub seed: u64,
    pub points: Vec<CurvePoint>,
    pub final_matrix: PreferenceMatrix<f64>,
    pub truth_signs: Vec<Vec<i8>>,
}

impl ErrorCurve {
    pub fn final_error(&self) -> f64 {
        self.points.last().map_or(0.0, |p| p.e_bin)
    }

    pub fn error_at(&self, impression: usize) -> Option<f64> {
        self.points.iter().find(|p| p.impression == impression).map(|p| p.e_bin)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of run `run`, derived from the root seed.
pub fn run_seed(root: u64, run: usize) -> u64 {
    splitmix64(root ^ splitmix64(run as u64))
}

/// Seed of impression `t` within a run. Every random draw of that
/// impression comes from streams of this seed.
pub fn impression_seed(run_seed: u64, t: usize) -> u64 {
    splitmix64(run_seed ^ splitmix64((t as u64).wrapping_add(0x5851_F42D_4C95_7F2D)))
}

/// Stream 0 picks the query, so every method sees the same query sequence.
/// Each method draws from its own stream after that.
fn method_stream(method: &Method) -> u64 {
    1 + Method::NAMES
        .iter()
        .position(|n| *n == method.name())
        .expect("built-in method") as u64
}

/// A validated configuration with its data loaded and per-query rankings
/// precomputed.
#[derive(Debug, Clone)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub click_model: ClickModel,
    pub rankers: Vec<FeatureRanker>,
    pub interaction: Dataset,
    pub evaluation: Dataset,
    pub truth: GroundTruth,
    pub schedule: Vec<usize>,
    contexts: Vec<QueryContext>,
}

fn load(source: &DatasetSource) -> Result<(Dataset, Dataset)> {
    match source {
        DatasetSource::Synthetic(spec) => {
            let split = spec.generate_split()?;
            Ok((split.interaction, split.evaluation))
        }
        DatasetSource::Letor {
            interaction,
            evaluation,
        } => Ok((read_letor(interaction)?, read_letor(evaluation)?)),
    }
}

fn max_label(data: &Dataset) -> u8 {
    data.queries
        .iter()
        .flat_map(|q| q.documents.iter().map(|d| d.relevance))
        .max()
        .unwrap_or(0)
}

impl Experiment {
    /// Loads data and checks everything that could fail inside the loop.
    pub fn prepare(config: ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let click_model = config.click_model.resolve()?;
        let rankers = config.rankers();
        let (interaction, evaluation) = load(&config.dataset)?;
        if interaction.queries.is_empty() {
            return Err(Error::NoQueries);
        }
        for r in &rankers {
            let available = interaction.feature_count.min(evaluation.feature_count);
            if r.feature_index >= available {
                return Err(Error::Config(format!(
                    "feature index {} out of range (dataset has {available} features)",
                    r.feature_index
                )));
            }
        }
        let label = max_label(&interaction);
        if label as usize > click_model.max_grade() {
            return Err(Error::GradeOutOfRange {
                grade: label,
                max: click_model.max_grade(),
            });
        }
        let truth = ground_truth_matrix(&rankers, &evaluation, config.ndcg_cutoff())?;
        let contexts = interaction
            .queries
            .par_iter()
            .map(|q| QueryContext::new(ranker_set(&rankers, q)))
            .collect();
        let schedule = config.schedule();
        Ok(Experiment {
            config,
            click_model,
            rankers,
            interaction,
            evaluation,
            truth,
            schedule,
            contexts,
        })
    }

    /// All runs of all methods, ordered by method then run.
    pub fn run(&self) -> Result<Vec<ErrorCurve>> {
        let units: Vec<(usize, usize)> = (0..self.config.methods.len())
            .flat_map(|m| (0..self.config.runs).map(move |r| (m, r)))
            .collect();
        let work = || {
            units
                .par_iter()
                .map(|&(m, r)| self.run_single(&self.config.methods[m], r))
                .collect::<Result<Vec<_>>>()
        };
        match self.config.threads {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("cannot start {n} worker threads: {e}")))?
                .install(work),
            None => work(),
        }
    }

    /// One run of one method: `T` impressions of Algorithm-style simulation.
    pub fn run_single(&self, method: &Method, run: usize) -> Result<ErrorCurve> {
        let seed = run_seed(self.config.seed, run);
        let stream = method_stream(method);
        let n_rankers = self.rankers.len();
        let mut total = PreferenceMatrix::<f64>::zeros(n_rankers);
        let mut points = Vec::with_capacity(self.schedule.len());
        let mut next = self.schedule.iter().copied().peekable();
        for t in 1..=self.config.impressions {
            let s = impression_seed(seed, t);
            let q = ChaCha8Rng::seed_from_u64(s).random_range(0..self.contexts.len());
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            rng.set_stream(stream);
            let ctx = &self.contexts[q];
            let k = self.config.k.min(ctx.rankers.num_docs());
            let m = method.multileave(ctx, k, &mut rng)?;
            let c = simulate_clicks(&self.click_model, &m, &self.interaction.queries[q], &mut rng)?;
            if c.any() {
                total.merge(&method.infer(ctx, &m, &c, &mut rng)?)?;
            }
            if next.peek() == Some(&t) {
                next.next();
                points.push(CurvePoint {
                    impression: t,
                    e_bin: binary_error(&total, &self.truth)?,
                });
            }
        }
        Ok(ErrorCurve {
            method: method.name().to_string(),
            run,
            seed,
            points,
            final_matrix: total,
            truth_signs: self.truth.signs.clone(),
        })
    }
}

/// Prepares and runs `config`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ErrorCurve>> {
    Experiment::prepare(config.clone())?.run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::SyntheticSpec;
    use crate::harness::config::{ClickModelChoice, RankerChoice};

    fn small(method: &str) -> ExperimentConfig {
        ExperimentConfig {
            seed: 11,
            impressions: 300,
            k: 5,
            runs: 3,
            ndcg_cutoff: None,
            checkpoints: None,
            threads: None,
            click_model: ClickModelChoice::Named("inf".into()),
            rankers: vec![RankerChoice::Index(0), RankerChoice::Index(1), RankerChoice::Index(2)],
            methods: vec![Method::from_name(method).unwrap()],
            dataset: DatasetSource::Synthetic(SyntheticSpec {
                n_queries: 20,
                n_docs_per_query: 12,
                n_features: 3,
                ..SyntheticSpec::default()
            }),
        }
    }

    #[test]
    fn curves_follow_the_schedule() {
        for name in Method::NAMES {
            let curves = run_experiment(&small(name)).unwrap();
            assert_eq!(curves.len(), 3);
            for (r, c) in curves.iter().enumerate() {
                assert_eq!(c.run, r);
                assert_eq!(c.method, name);
                let at: Vec<usize> = c.points.iter().map(|p| p.impression).collect();
                assert_eq!(at, vec![1, 2, 5, 10, 20, 50, 100, 200, 300]);
                assert!(c.points.iter().all(|p| (0.0..=1.0).contains(&p.e_bin)));
                assert!(c.final_matrix.is_antisymmetric());
            }
            assert_ne!(curves[0].seed, curves[1].seed);
        }
    }

    #[test]
    fn same_seed_same_curves() {
        let cfg = small("ppm");
        assert_eq!(run_experiment(&cfg).unwrap(), run_experiment(&cfg).unwrap());
        let other = ExperimentConfig {
            seed: 12,
            ..cfg.clone()
        };
        assert_ne!(
            run_experiment(&cfg).unwrap()[0].final_matrix,
            run_experiment(&other).unwrap()[0].final_matrix
        );
    }

    #[test]
    fn thread_count_does_not_matter() {
        let mut cfg = small("tdm");
        cfg.methods = vec![Method::Tdm, Method::Ppm];
        cfg.threads = Some(1);
        let one = run_experiment(&cfg).unwrap();
        cfg.threads = Some(3);
        assert_eq!(one, run_experiment(&cfg).unwrap());
    }

    #[test]
    fn methods_see_the_same_queries() {
        let seed = run_seed(5, 0);
        let pick = |t| ChaCha8Rng::seed_from_u64(impression_seed(seed, t)).random_range(0..1000usize);
        let picks: Vec<usize> = (1..50).map(pick).collect();
        assert_eq!(picks, (1..50).map(pick).collect::<Vec<_>>());
        assert!(picks.iter().collect::<std::collections::BTreeSet<_>>().len() > 40);
    }

    #[test]
    fn errors_surface_before_the_loop() {
        let mut cfg = small("ppm");
        cfg.rankers.push(RankerChoice::Index(7));
        assert!(Experiment::prepare(cfg).is_err());
        let mut cfg = small("ppm");
        cfg.click_model = ClickModelChoice::Custom(ClickModel {
            name: "binary".into(),
            p_click: vec![0.1, 0.9],
            p_stop: vec![0.0, 0.0],
        });
        assert!(matches!(Experiment::prepare(cfg), Err(Error::GradeOutOfRange { .. })));
    }
}
