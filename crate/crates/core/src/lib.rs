//! Multileaved comparison of rankers.
//!
//! Multileaving shows users one list blended from the rankings of several
//! rankers and infers, from clicks, which rankers users prefer. This crate
//! provides:
//!
//! - [`ppm`]: Pairwise Preference Multileaving, a considerate method whose
//!   inferred preferences are unbiased under position-biased clicks.
//! - [`baselines`]: Team Draft, Probabilistic and Sample Only Scored
//!   Multileaving.
//! - [`clicksim`]: cascading click models for simulated users.
//! - [`data`]: LETOR-format datasets, a synthetic generator, feature rankers
//!   and NDCG ground truth.
//! - [`oracle`]: exact enumeration of list distributions and expected
//!   outcomes on small instances.
//! - [`harness`]: the simulation loop, binary error, and result files.

pub mod baselines;
pub mod cli;
pub mod clicksim;
pub mod data;
pub mod error;
pub mod harness;
pub mod method;
pub mod oracle;
pub mod ppm;
pub mod scalar;
pub mod types;

pub use error::{Error, Result};
pub use method::{Method, QueryContext};
pub use types::{
    extract_click_preferences, merge_preferences, rank_of, ClickVector, DocPairPreference, DocumentId, MultileavedList,
    Payload, PreferenceMatrix, RankerSet, Ranking, TeamAssignment,
};
