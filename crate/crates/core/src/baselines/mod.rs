//! Earlier multileaved comparison methods used as baselines.

pub mod pm;
pub mod sosm;
pub mod tdm;

pub use pm::{construct_pm, infer_pm, infer_pm_exact, infer_pm_sampled, PmConfig};
pub use sosm::{construct_sosm, infer_sosm, SosmCredit};
pub use tdm::{construct_tdm, infer_tdm};
