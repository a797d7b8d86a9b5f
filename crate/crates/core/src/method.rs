//! Uniform interface over all multileaved comparison methods.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::baselines::{self, PmConfig, SosmCredit};
use crate::error::{Error, Result};
use crate::ppm::{self, ChoiceSetIndex};
use crate::scalar::Scalar;
use crate::types::{ClickVector, MultileavedList, PreferenceMatrix, RankerSet};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum Method {
    Ppm,
    Tdm,
    Pm(PmConfig),
    Sosm {
        #[serde(default)]
        credit: SosmCredit,
    },
}

impl Method {
    pub const NAMES: [&'static str; 4] = ["tdm", "pm", "sosm", "ppm"];

    /// The method with its default configuration.
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "ppm" => Ok(Method::Ppm),
            "tdm" => Ok(Method::Tdm),
            "pm" => Ok(Method::Pm(PmConfig::default())),
            "sosm" => Ok(Method::Sosm {
                credit: SosmCredit::default(),
            }),
            _ => Err(Error::UnknownName {
                kind: "method",
                name: name.into(),
            }),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Method::Ppm => "ppm",
            Method::Tdm => "tdm",
            Method::Pm(_) => "pm",
            Method::Sosm { .. } => "sosm",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Method::Pm(cfg) => cfg.validate(),
            _ => Ok(()),
        }
    }

    pub fn multileave<R: Rng + ?Sized>(&self, ctx: &QueryContext, k: usize, rng: &mut R) -> Result<MultileavedList> {
        match self {
            Method::Ppm => ppm::construct_with_index(&ctx.choice, k, rng),
            Method::Tdm => baselines::construct_tdm(&ctx.rankers, k, rng),
            Method::Pm(cfg) => baselines::construct_pm(&ctx.rankers, k, cfg.tau, rng),
            Method::Sosm { .. } => baselines::construct_sosm(&ctx.rankers, k, rng),
        }
    }

    /// Per-impression preferences as used during simulation.
    pub fn infer<R: Rng + ?Sized>(
        &self,
        ctx: &QueryContext,
        m: &MultileavedList,
        c: &ClickVector,
        rng: &mut R,
    ) -> Result<PreferenceMatrix<f64>> {
        match self {
            Method::Pm(cfg) => baselines::infer_pm(&ctx.rankers, m, c, cfg, rng),
            _ => self.infer_exact(ctx, m, c),
        }
    }

    /// Per-impression preferences without any sampling, in any scalar type.
    ///
    /// For PM this marginalises over assignments exactly.
    pub fn infer_exact<S: Scalar>(
        &self,
        ctx: &QueryContext,
        m: &MultileavedList,
        c: &ClickVector,
    ) -> Result<PreferenceMatrix<S>> {
        let n = ctx.rankers.num_rankers();
        match self {
            Method::Ppm => ppm::infer_ppm(&ctx.rankers, m, c, &ctx.choice),
            Method::Tdm => {
                let teams = m
                    .teams()
                    .ok_or_else(|| Error::Config("team draft list without team assignment".into()))?;
                baselines::infer_tdm(teams, c, n)
            }
            Method::Pm(cfg) => baselines::infer_pm_exact(&ctx.rankers, m, c, cfg.tau),
            Method::Sosm { credit } => baselines::infer_sosm(&ctx.rankers, m, c, *credit),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Rankings for one query plus the precomputed choice sets.
#[derive(Debug, Clone)]
pub struct QueryContext {
    pub rankers: RankerSet,
    pub choice: ChoiceSetIndex,
}

impl QueryContext {
    pub fn new(rankers: RankerSet) -> Self {
        let choice = ppm::build_choice_index(&rankers);
        QueryContext { rankers, choice }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for name in Method::NAMES {
            assert_eq!(Method::from_name(name).unwrap().name(), name);
        }
        assert!(Method::from_name("om").is_err());
    }

    #[test]
    fn deserializes_method_blocks() {
        #[derive(Deserialize)]
        struct Wrap {
            methods: Vec<Method>,
        }
        let w: Wrap = toml::from_str(
            r#"
            [[methods]]
            name = "ppm"
            [[methods]]
            name = "pm"
            tau = 2.0
            [[methods]]
            name = "sosm"
            credit = "log_discount"
            "#,
        )
        .unwrap();
        assert_eq!(w.methods[0], Method::Ppm);
        assert_eq!(w.methods[1], Method::Pm(PmConfig { tau: 2.0, eta: 10_000 }));
        assert_eq!(
            w.methods[2],
            Method::Sosm {
                credit: SosmCredit::LogDiscount
            }
        );
    }
}
