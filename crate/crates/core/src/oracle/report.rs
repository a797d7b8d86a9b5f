//! Property-by-property verification over generated instance families.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::instances::{correlated_spec, pareto_instance, position_bias_specs, random_instance};
use super::{
    check_considerateness, check_pareto_fidelity, check_uncorrelated_fidelity, Considerateness, ParetoFidelity,
};
use crate::error::{Error, Result};
use crate::method::Method;
use crate::types::RankerSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    /// No document above the best rank any ranker gives it.
    Considerateness,
    /// Zero expected preferences under position-biased clicks.
    UncorrelatedFidelity,
    /// A Pareto-dominating ranker wins in expectation under correlated clicks.
    ParetoFidelity,
}

impl Property {
    pub const ALL: [Property; 3] = [
        Property::Considerateness,
        Property::UncorrelatedFidelity,
        Property::ParetoFidelity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Considerateness => "considerateness",
            Property::UncorrelatedFidelity => "uncorrelated-fidelity",
            Property::ParetoFidelity => "pareto-fidelity",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == name)
            .ok_or_else(|| Error::UnknownName {
                kind: "property",
                name: name.into(),
            })
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub method: String,
    pub property: Property,
    pub instances: usize,
    pub holding: usize,
    /// Description of the first instance where the property failed.
    pub first_failure: Option<String>,
}

impl PropertyReport {
    pub fn holds(&self) -> bool {
        self.holding == self.instances
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.holds() {
            write!(
                f,
                "{} {}: holds on {}/{} instances",
                self.method, self.property, self.holding, self.instances
            )
        } else {
            write!(
                f,
                "{} {}: fails on {}/{} instances; first: {}",
                self.method,
                self.property,
                self.instances - self.holding,
                self.instances,
                self.first_failure.as_deref().unwrap_or("?")
            )
        }
    }
}

fn describe(rankers: &RankerSet) -> String {
    let lists: Vec<String> = rankers
        .rankings()
        .iter()
        .map(|l| l.docs().iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" "))
        .collect();
    format!("[{}]", lists.join(" | "))
}

/// Checks `property` for `method` on `n` instances drawn from the family
/// belonging to that property.
///
/// - considerateness: random rankings, 2 to 4 rankers, more documents than
///   rankers (at most 6), list length 1 to 4.
/// - uncorrelated fidelity: random rankings of 2 to 5 documents, 2 or 3
///   rankers, list length 2 to 4, under every spec of
///   [`position_bias_specs`].
/// - Pareto fidelity: [`pareto_instance`] with 3 to 5 documents and 2 or 3
///   rankers under [`correlated_spec`].
pub fn verify_property(method: &Method, property: Property, n: usize, seed: u64) -> Result<PropertyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut holding = 0;
    let mut first_failure = None;
    for _ in 0..n {
        let failure = match property {
            Property::Considerateness => {
                let n_rankers = rng.random_range(2..=4);
                let n_docs = rng.random_range(n_rankers + 1..=6);
                let k = rng.random_range(1..=4.min(n_docs));
                let rankers = random_instance(n_docs, n_rankers, &mut rng);
                match check_considerateness(method, &rankers, k)? {
                    Considerateness::Holds { .. } => None,
                    Considerateness::Counterexample(m) => Some(format!(
                        "rankers {} k={k}: list {} is inconsiderate at rank {}",
                        describe(&rankers),
                        m.displayed.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" "),
                        m.first_inconsiderate_rank(&rankers).unwrap_or(0)
                    )),
                }
            }
            Property::UncorrelatedFidelity => {
                let n_docs = rng.random_range(2..=5);
                let n_rankers = rng.random_range(2..=3);
                let k = rng.random_range(2..=4.min(n_docs));
                let rankers = random_instance(n_docs, n_rankers, &mut rng);
                let mut failure = None;
                for (i, spec) in position_bias_specs(k).iter().enumerate() {
                    let (zero, expected) = check_uncorrelated_fidelity(method, &rankers, spec, k)?;
                    if !zero {
                        failure = Some(format!(
                            "rankers {} k={k} click spec {i}: max |E[P]| = {:.6}",
                            describe(&rankers),
                            expected.max_abs()
                        ));
                        break;
                    }
                }
                failure
            }
            Property::ParetoFidelity => {
                let n_docs = rng.random_range(3..=5);
                let n_rankers = rng.random_range(2..=3);
                let inst = pareto_instance(n_docs, n_rankers, &mut rng);
                let spec = correlated_spec(inst.cutoff);
                match check_pareto_fidelity(method, &inst.rankers, &inst.relevant, &spec)? {
                    ParetoFidelity::Holds { .. } => None,
                    ParetoFidelity::Violated { dominator, row } => Some(format!(
                        "rankers {} relevant {:?} cutoff {}: ranker {dominator} row {:?}",
                        describe(&inst.rankers),
                        inst.relevant.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                        inst.cutoff,
                        row.iter().map(|v| v.to_string()).collect::<Vec<_>>()
                    )),
                    ParetoFidelity::NotApplicable => {
                        unreachable!("pareto instances always have a dominator")
                    }
                }
            }
        };
        match failure {
            None => holding += 1,
            Some(f) => {
                first_failure.get_or_insert(f);
            }
        }
    }
    Ok(PropertyReport {
        method: method.name().to_string(),
        property,
        instances: n,
        holding,
        first_failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for p in Property::ALL {
            assert_eq!(Property::from_name(p.name()).unwrap(), p);
        }
        assert!(Property::from_name("speed").is_err());
    }

    #[test]
    fn table_structure_for_considerateness() {
        for name in ["ppm", "tdm", "sosm"] {
            let r = verify_property(&Method::from_name(name).unwrap(), Property::Considerateness, 15, 1).unwrap();
            assert!(r.holds(), "{r}");
            assert!(r.to_string().contains("holds"));
        }
        let pm = verify_property(&Method::from_name("pm").unwrap(), Property::Considerateness, 15, 1).unwrap();
        assert_eq!(pm.holding, 0);
        assert!(pm.first_failure.is_some());
    }

    #[test]
    fn ppm_fidelity_small_run() {
        assert!(verify_property(&Method::Ppm, Property::UncorrelatedFidelity, 5, 2)
            .unwrap()
            .holds());
        assert!(verify_property(&Method::Ppm, Property::ParetoFidelity, 5, 3)
            .unwrap()
            .holds());
    }
}
